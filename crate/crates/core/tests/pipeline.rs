// End-to-end use of the public API: the pieces composed the way the
// inequality checks compose them.

use bohrsum::bohr::BohrNormTable;
use bohrsum::burgess::{basic_burgess_sides, weil_check, RootSpec};
use bohrsum::fourier::pv_chain_report;
use bohrsum::recurrence::{
    brute_force_best, kth_power_recurrence, primitive_root_recurrence, Predicate,
};
use bohrsum::zp::FieldCtx;
use bohrsum::{Rational, ResidueSet};

#[test]
fn pv_chain_at_a_regular_radius() {
    let ctx = FieldCtx::new(211).unwrap();
    let gamma = [5u64, 17];
    let table = BohrNormTable::build(&ctx, &gamma).unwrap();
    let eps = table.find_regular_value(&Rational::new(1, 10)).unwrap();
    assert!(table.is_regular(&eps).unwrap().regular);
    for chi in ctx.characters().filter(|c| !c.is_trivial()) {
        let rep = pv_chain_report(&ctx, &gamma, &eps, &chi).unwrap();
        assert!(rep.holds(), "chi_{}: {rep:?}", chi.index());
        assert_eq!(rep.bohr_size, table.size(&eps));
    }
}

#[test]
fn recurrence_finds_the_optimal_witness() {
    for p in [101u64, 199, 307] {
        let ctx = FieldCtx::new(p).unwrap();
        for gamma in [vec![3u64], vec![2, 9]] {
            let table = BohrNormTable::build(&ctx, &gamma).unwrap();
            let g: Vec<u32> = table.gamma().to_vec();
            for k in [2u64, 3] {
                let found = kth_power_recurrence(&ctx, &table, k, 1.0).unwrap();
                let best = brute_force_best(&ctx, &g, Predicate::KthPower(k)).unwrap();
                assert_eq!(found.quality, best.quality, "p={p} k={k}");
                let y = found.root.unwrap() as u64;
                assert_eq!(ctx.pow(y, k), found.x);
            }
            let found = primitive_root_recurrence(&ctx, &table, 1.0).unwrap();
            let best = brute_force_best(&ctx, &g, Predicate::PrimitiveRoot).unwrap();
            assert!(ctx.is_primitive_root(found.x as u64).unwrap());
            assert_eq!(found.quality, best.quality);
        }
    }
}

#[test]
fn burgess_inequality_on_bohr_sets() {
    let ctx = FieldCtx::new(211).unwrap();
    let table = BohrNormTable::build(&ctx, &[7]).unwrap();
    let b = table.bohr_set(&Rational::new(1, 8)).without_zero();
    let c = ResidueSet::interval(211, 3);
    for j in [1u64, 2, 35, 105] {
        let chi = ctx.character(j);
        for k in 1..=3 {
            let sides = basic_burgess_sides(&chi, &b, &b, &c, k).unwrap();
            assert!(sides.holds(), "j={j} k={k}: {sides:?}");
            assert!(sides.t3_exact <= sides.t3 * (1.0 + 1e-9));
        }
    }
}

#[test]
fn weil_on_burgess_shapes() {
    let ctx = FieldCtx::new(101).unwrap();
    let shapes = [vec![1u64, 2], vec![0, 5, 9, 40], vec![3, 3, 3, 7]];
    for chi in ctx.characters().filter(|c| !c.is_trivial()) {
        for c in &shapes {
            let f = RootSpec::burgess_shape(101, c);
            let w = weil_check(&chi, &f).unwrap();
            assert!(w.pass, "chi_{} c={c:?}: {w:?}", chi.index());
        }
    }
}
