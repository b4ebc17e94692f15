use subpack::bounds::BoundEngine;
use subpack::constructions::{build_plan, dualize_packing, linkage_plan, packing_lower};
use subpack::oracle::verify_packing;
use subpack::PackingParams;

fn check_built(p: PackingParams, expect: u128) {
    assert_eq!(packing_lower(&p).unwrap(), expect, "{p}");
    let c = dualize_packing(&p);
    let plan = linkage_plan(&c).unwrap();
    assert_eq!(plan.size(), expect);
    let code = build_plan(&c, &plan, 1 << 20).unwrap().dual();
    assert_eq!(code.len() as u128, expect);
    assert_eq!(code.block_dim(), p.k as usize);
    let report = verify_packing(&code, p.t as usize, p.lambda).unwrap();
    assert!(report.valid, "{p}: {report}");
    let upper = BoundEngine::new().best_upper(&p).unwrap().upper;
    assert!(expect <= upper, "{p}: lower {expect} above upper {upper}");
}

// above the previously known 6933
#[test]
fn lifted_code_a_8_4_3_lambda_2() {
    check_built(PackingParams::new(2, 8, 4, 3, 2).unwrap(), 8192);
}

#[test]
fn small_built_lower_bounds_verify() {
    for (n, k, t, lambda) in [(6, 4, 3, 2), (6, 3, 2, 2), (7, 3, 2, 2), (6, 2, 1, 2)] {
        let p = PackingParams::new(2, n, k, t, lambda).unwrap();
        let lower = packing_lower(&p).unwrap();
        check_built(p, lower);
    }
}
