//! Properties the theory does not state, measured on fixtures and reported.

mod common;

use homleib_core::cochain::SignConvention;
use homleib_core::deformation::{obstruction, RestrictedSum};
use homleib_core::fixtures;
use homleib_core::morphism_complex::{differential_tensors, MorphismComplex, MorphismReps};

const CONV: SignConvention = SignConvention::PINNED;

fn d_of_obstruction(md: &homleib_core::deformation::MorphismDeformation, reps: &MorphismReps) -> bool {
    let f = obstruction(md, 2, RestrictedSum::Set).unwrap();
    let (a, b, c) = differential_tensors(md.morphism(), reps, &CONV, 3, &f.o1, &f.o2, Some(&f.o3));
    a.is_zero() && b.is_zero() && c.is_zero()
}

#[test]
fn obstruction_is_a_cocycle_for_compatible_first_orders() {
    let mut rng = common::rng(42);
    let (mut compat, mut compat_cocycle, mut raw, mut raw_cocycle) = (0, 0, 0, 0);
    for phi in fixtures::morphisms() {
        let mc = MorphismComplex::new(&phi, CONV, 3).unwrap();
        let reps = MorphismReps::new(&phi).unwrap();
        for _ in 0..4 {
            let md = common::random_compatible_order1(&mc, &mut rng);
            compat += 1;
            compat_cocycle += d_of_obstruction(&md, &reps) as usize;
            let md = common::random_order1(&phi, &mut rng);
            raw += 1;
            raw_cocycle += d_of_obstruction(&md, &reps) as usize;
        }
    }
    println!("d(F_2) = 0 for {compat_cocycle}/{compat} compatible and {raw_cocycle}/{raw} unconstrained order-1 deformations");
    assert_eq!(compat_cocycle, compat);
    assert!(raw_cocycle < raw, "every unconstrained sample gave a cocycle; the fixture set no longer separates the cases");
}
