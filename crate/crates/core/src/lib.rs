pub mod cli;
pub mod ff;
pub mod linalg;
pub mod mpoly;
pub mod nilcone;
pub mod partitions;
pub mod report;
pub mod rootsys;
pub mod springer;
pub mod sweep;
pub mod weylinv;
