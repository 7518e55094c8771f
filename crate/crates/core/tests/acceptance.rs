//! Acceptance suite: nine exact checks at desk scale. Each prints one
//! `PASS`/`FAIL` line; the test fails if any check fails.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::Instant;

use homleib_core::calibration::calibrate_convention;
use homleib_core::cochain::{coboundary_tensor, CochainComplex, CochainSpace, SignConvention};
use homleib_core::deformation::{
    infinitesimal, morphism_order_residual, regrouping_identity_check, solve_extension, Extension, MorphismDeformation, TruncatedDeformation,
};
use homleib_core::fixtures;
use homleib_core::linalg::kernel_basis;
use homleib_core::morphism_complex::{pull, push, MorphismComplex, MorphismReps};
use homleib_core::{Morphism, Scalar};
use num_traits::Zero;

const CONV: SignConvention = SignConvention::PINNED;

fn c1_delta_squared() -> String {
    let start = Instant::now();
    let mut checked = 0;
    for a in fixtures::battery() {
        let c = CochainComplex::new(&a.adjoint_representation(), CONV, 4).unwrap();
        for p in 1..=2 {
            let composed = c.differential(p + 1).mul(c.differential(p)).unwrap();
            assert!(composed.is_zero(), "delta^2 != 0 on {:?} at p = {p}", a.labels());
            checked += 1;
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 10.0, "battery took {elapsed:?}");
    format!("{checked} composed coboundary matrices vanish in {:.2}s", elapsed.as_secs_f64())
}

fn c2_morphism_d_squared() -> String {
    let mut checked = 0;
    for phi in fixtures::morphisms() {
        let mc = MorphismComplex::new(&phi, CONV, 4).unwrap();
        for p in 1..=2 {
            assert!(mc.differential(p + 1).mul(mc.differential(p)).unwrap().is_zero());
            for j in 0..mc.dim(p) {
                let mut e = vec![Scalar::zero(); mc.dim(p)];
                e[j] = Scalar::from_integer(1.into());
                let once = mc.apply(&mc.element(p, &e)).unwrap();
                assert!(mc.apply(&once).unwrap().is_zero());
                checked += 1;
            }
        }
    }
    format!("d(d(b)) = 0 for {checked} spanning cochains over {} morphisms", fixtures::morphisms().len())
}

fn c3_intertwining() -> String {
    let mut rng = common::rng(3);
    let mut checked = 0;
    for phi in fixtures::morphisms() {
        let reps = MorphismReps::new(&phi).unwrap();
        let spaces: Vec<(CochainSpace, CochainSpace)> =
            (1..=2).map(|p| (CochainSpace::new(&reps.source, p).unwrap(), CochainSpace::new(&reps.target, p).unwrap())).collect();
        for trial in 0..100 {
            let p = 1 + trial % 2;
            let (s, t) = &spaces[p - 1];
            let u = s.element(&common::random_vec(&mut rng, s.dim())).into_tensor();
            let v = t.element(&common::random_vec(&mut rng, t.dim())).into_tensor();
            let lhs = coboundary_tensor(&reps.mixed, &push(&phi, &u).sub(&pull(&phi, &v)), p, &CONV);
            let rhs = push(&phi, &coboundary_tensor(&reps.source, &u, p, &CONV)).sub(&pull(&phi, &coboundary_tensor(&reps.target, &v, p, &CONV)));
            assert_eq!(lhs, rhs, "intertwining fails for p = {p}");
            checked += 1;
        }
    }
    format!("{checked} random pairs")
}

fn c4_vanishing_transfer() -> String {
    let mut instances = Vec::new();
    let mut witnesses = 0;
    for (k, phi) in fixtures::morphisms().into_iter().enumerate() {
        let mc = MorphismComplex::new(&phi, CONV, 4).unwrap();
        for p in 1..=3 {
            let h_l = mc.source_complex().cohomology_dim(p).unwrap();
            let h_m = mc.target_complex().cohomology_dim(p).unwrap();
            let h_lm = if p == 1 { 0 } else { mc.mixed_complex().cohomology_dim(p - 1).unwrap() };
            if h_l + h_m + h_lm != 0 {
                continue;
            }
            assert_eq!(mc.cohomology_dim(p).unwrap(), 0, "{:?} at p = {p}", phi.source().labels());
            let cycles = kernel_basis(mc.differential(p));
            for z in cycles.vectors() {
                let c = mc.element(p, z);
                let b = mc.vanishing_transfer_witness(&c).unwrap();
                if p >= 2 {
                    assert_eq!(mc.apply(&b).unwrap(), c);
                } else {
                    assert!(c.is_zero());
                }
                witnesses += 1;
            }
            instances.push(format!("phi{k}@{p}"));
        }
    }
    assert!(!instances.is_empty(), "no fixture meets the hypotheses");
    format!("{} instances ({}), {witnesses} exact preimages", instances.len(), instances.join(" "))
}

fn c5_classical_reduction() -> String {
    let mut rng = common::rng(5);
    let mut checked = 0;
    let algebras = [fixtures::ff_e(), fixtures::sl2(), fixtures::abelian(2, 2), fixtures::ee_f_ff_e()];
    for a in &algebras {
        let rep = a.adjoint_representation();
        for p in 1..=3 {
            let mut sign: Option<bool> = None;
            let trials = if a.dim() == 3 && p == 3 { 5 } else { 10 };
            for _ in 0..trials {
                let mut dims = vec![a.dim(); p];
                dims.push(a.dim());
                let f = common::random_tensor(&mut rng, dims);
                let ours = coboundary_tensor(&rep, &f, p, &CONV);
                let theirs = common::classical_coboundary(a, &f, p);
                if ours.is_zero() && theirs.is_zero() {
                    checked += 1;
                    continue;
                }
                let same = ours == theirs;
                assert!(same || ours == theirs.scale(&Scalar::from_integer((-1).into())), "p = {p}");
                assert!(sign.is_none_or(|s| s == same), "sign changes within degree {p}");
                sign = Some(same);
                checked += 1;
            }
            assert_ne!(sign, Some(false), "pinned convention differs from the classical one by -1 in degree {p}");
        }
    }
    assert!(checked >= 100);
    let h = |a: &homleib_core::HomNaryAlgebra, p: usize| homleib_core::cochain::cohomology_dim(&a.adjoint_representation(), p, &CONV).unwrap();
    let ff = h(&fixtures::ff_e(), 1);
    let (ab1, ab2) = (h(&fixtures::abelian(2, 2), 1), h(&fixtures::abelian(2, 2), 2));
    assert_eq!((ff, ab1, ab2), (2, 4, 8));
    format!("{checked} random cochains agree with sign +1; H^1([f,f]=e) = {ff}, abelian H^1 = {ab1}, H^2 = {ab2}")
}

fn c6_regrouping() -> String {
    let mut rng = common::rng(6);
    let bases = [fixtures::ff_e(), fixtures::ff_e_twisted(), fixtures::sl2_twisted(), fixtures::ff_f_e3_twisted(), fixtures::abelian(3, 2)];
    let mut checked = 0;
    for trial in 0..120 {
        let base = bases[trial % bases.len()].clone();
        let order = 1 + trial % 3;
        let coeffs = (0..order).map(|_| common::random_tensor(&mut rng, base.bracket().dims().to_vec())).collect();
        let d = TruncatedDeformation::new(base, coeffs).unwrap();
        let l = 1 + (trial / 3) % 3;
        let r = regrouping_identity_check(&d, l).unwrap();
        assert!(r.holds, "trial {trial}");
        if trial % 4 == 0 {
            // the residual itself against the pointwise evaluation
            let a = d.base();
            let pointwise = common::order_equations(a.arity(), d.coeffs(), &[], &[], a.alpha(), a.alpha(), l);
            let len = r.residual.len();
            assert_eq!(r.residual.data(), &pointwise[..len]);
        }
        checked += 1;
    }
    format!("{checked} random deformations")
}

fn c7_infinitesimal_cocycle() -> String {
    let mut rng = common::rng(7);
    let mut checked = 0;
    for phi in fixtures::morphisms() {
        let mc = MorphismComplex::new(&phi, CONV, 3).unwrap();
        let mut cases = vec![MorphismDeformation::trivial(phi.clone(), 1)];
        for _ in 0..3 {
            cases.push(common::random_compatible_order1(&mc, &mut rng));
        }
        for md in cases {
            assert!(md.valid_through(1));
            let c = infinitesimal(&md).unwrap();
            assert!(mc.apply(&c).unwrap().is_zero());
            checked += 1;
        }
    }
    let ab = fixtures::abelian(2, 2);
    let ff = fixtures::ff_e().bracket().clone();
    let md = MorphismDeformation::new(Morphism::identity(&ab), vec![ff.clone()], vec![ff], vec![]).unwrap();
    let mc = MorphismComplex::new(md.morphism(), CONV, 3).unwrap();
    assert!(mc.apply(&infinitesimal(&md).unwrap()).unwrap().is_zero());
    format!("{} deformations valid through order 1", checked + 1)
}

fn c8_extension_oracle() -> String {
    let mut rng = common::rng(8);
    let mut phis = fixtures::morphisms();
    phis.push(Morphism::identity(&fixtures::abelian(2, 2)));
    phis.push(Morphism::identity(&fixtures::abelian(3, 2)));
    let (mut extends, mut obstructed) = (0, 0);
    for trial in 0..60 {
        let phi = &phis[trial % phis.len()];
        let md = common::random_order1(phi, &mut rng);
        let oracle = common::extendable_oracle(&md, 2);
        match solve_extension(&md, 2, &CONV).unwrap() {
            Extension::Extends { deformation, .. } => {
                assert!(oracle, "solver extends, oracle says obstructed (trial {trial})");
                let (a, b, c) = morphism_order_residual(&deformation, 2);
                assert!(a.is_zero() && b.is_zero() && c.is_zero());
                extends += 1;
            }
            Extension::Obstructed => {
                assert!(!oracle, "solver says obstructed, oracle extends (trial {trial})");
                obstructed += 1;
            }
        }
    }
    assert!(extends > 0 && obstructed > 0, "only one verdict seen: {extends} / {obstructed}");
    format!("{} random deformations: {extends} extend, {obstructed} obstructed, all matching", extends + obstructed)
}

fn c9_calibration() -> String {
    let cal = calibrate_convention(&fixtures::battery(), &fixtures::morphisms()).unwrap();
    assert!(!cal.passing.is_empty());
    assert!(cal.pinned_passes());
    let ids: Vec<String> = cal.passing.iter().map(SignConvention::id).collect();
    format!("{} of 128 conventions pass: {}; shipped default {}", ids.len(), ids.join(", "), CONV.id())
}

#[test]
fn acceptance() {
    type Check = fn() -> String;
    let checks: [(&str, Check); 9] = [
        ("delta^2 = 0 battery", c1_delta_squared),
        ("d^2 = 0 on morphism complexes", c2_morphism_d_squared),
        ("intertwining of push and pull", c3_intertwining),
        ("vanishing transfer", c4_vanishing_transfer),
        ("classical reduction", c5_classical_reduction),
        ("regrouping identity", c6_regrouping),
        ("infinitesimal cocycle", c7_infinitesimal_cocycle),
        ("obstruction and extension", c8_extension_oracle),
        ("calibration", c9_calibration),
    ];
    let mut failed = Vec::new();
    for (i, (name, check)) in checks.iter().enumerate() {
        let start = Instant::now();
        match catch_unwind(AssertUnwindSafe(check)) {
            Ok(detail) => println!("criterion {} PASS {name}: {detail} [{:.1}s]", i + 1, start.elapsed().as_secs_f64()),
            Err(e) => {
                let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default();
                println!("criterion {} FAIL {name}: {msg}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
