use nilcone_lab::mpoly::GroebnerBudget;
use nilcone_lab::weylinv::{
    build_g2_weyl_action, build_sn_quotient_action, certify_polynomial_invariants, elementary_symmetric_images,
    find_invariant_generators, GroupAction,
};

fn actions() -> Vec<GroupAction> {
    let mut v: Vec<GroupAction> =
        [(2, 2), (3, 3), (4, 2)].iter().map(|&(n, p)| build_sn_quotient_action(n, p).unwrap()).collect();
    v.push(build_g2_weyl_action(2).unwrap());
    v.push(build_g2_weyl_action(3).unwrap());
    v
}

#[test]
fn independent_invariants_have_degree_product_at_least_image_order() {
    let budget = GroebnerBudget::default();
    for a in actions() {
        let gens = find_invariant_generators(&a, 12, budget).unwrap();
        let cert = certify_polynomial_invariants(&a, &gens, budget).unwrap();
        if cert.independent && gens.len() == a.dim() {
            assert!(cert.degree_product >= cert.image_order, "{}: {:?}", a.label(), cert.degrees);
        }
    }
    for (n, p) in [(3, 3), (4, 2), (5, 5)] {
        let a = build_sn_quotient_action(n, p).unwrap();
        let cert = certify_polynomial_invariants(&a, &elementary_symmetric_images(n, p).unwrap(), budget).unwrap();
        assert!(cert.independent);
        assert!(cert.degree_product >= cert.image_order, "{}", a.label());
    }
}
