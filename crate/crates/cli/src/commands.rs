//! The subcommands. Each returns a [`Report`]; input problems surface as
//! [`CliError`].

use std::path::{Path, PathBuf};

use homleib_core::cochain::CochainComplex;
use homleib_core::deformation::{morphism_order_residual, obstruction, solve_extension, Extension, MorphismDeformation, RestrictedSum};
use homleib_core::linalg::kernel_basis;
use homleib_core::morphism_complex::differential_tensors;
use homleib_core::scalar::to_text;
use homleib_core::{Error, HomNaryAlgebra, Morphism, MorphismComplex, Representation, Scalar, SignConvention, Tensor, ViolationKind};
use num_traits::Signed;

use crate::doc::{self, DeformationDocument, Loader};
use crate::report::{violation_check, Check, NamedTensor, Report, Status, Table};
use crate::{Cli, CliError, Command, DeformAction, Degrees, SumMode};

pub fn execute(cli: &Cli, echo: Vec<String>) -> Result<Report, CliError> {
    let conv = cli.common.convention.unwrap_or(SignConvention::PINNED);
    let mut loader = Loader::new();
    let mut report = Report::new(echo, conv.id());
    match &cli.command {
        Command::Validate { algebra, morphism, module } => validate(&mut loader, &mut report, algebra, morphism.as_deref(), module.as_deref())?,
        Command::Cohomology { algebra, module, degrees } => cohomology(&mut loader, &mut report, conv, algebra, module, *degrees)?,
        Command::MorphismCohomology { files, degrees } => morphism_cohomology(&mut loader, &mut report, conv, files, *degrees)?,
        Command::Deform { action, deformation, order, sum, output } => {
            let mode = match sum {
                SumMode::Set => RestrictedSum::Set,
                SumMode::ThreeSums => RestrictedSum::ThreeSums,
            };
            deform(&mut loader, &mut report, conv, *action, deformation, *order, mode, output.as_deref())?
        }
    }
    report.inputs = loader.into_inputs();
    Ok(report)
}

fn algebra_checks(report: &mut Report, prefix: &str, a: &HomNaryAlgebra) {
    let labels = a.labels().to_vec();
    let slots = |_: ViolationKind, _: usize| labels.clone();
    let out = |_: ViolationKind| labels.clone();
    report.check(violation_check(&format!("{prefix} hom-leibniz"), &a.check_hom_leibniz(), slots, out));
    report.check(violation_check(&format!("{prefix} multiplicative"), &a.check_multiplicative(), slots, out));
}

fn representation_check(report: &mut Report, r: &Representation) {
    let (alg, module) = (r.algebra().labels().to_vec(), r.labels().to_vec());
    let slots = |kind: ViolationKind, pos: usize| match kind {
        ViolationKind::HomLeibniz { module_slot: Some(q) } if q == pos => module.clone(),
        _ => alg.clone(),
    };
    report.check(violation_check("module hom-leibniz", &r.check(), slots, |_| module.clone()));
}

fn morphism_check(report: &mut Report, phi: &Morphism) {
    let (src, tgt) = (phi.source().labels().to_vec(), phi.target().labels().to_vec());
    report.check(violation_check("morphism", &phi.check(), |_, _| src.clone(), |_| tgt.clone()));
}

/// Checks source, target and morphism, skipping repeated algebras.
fn morphism_checks(report: &mut Report, phi: &Morphism, already: Option<&HomNaryAlgebra>) {
    if already != Some(phi.source()) {
        algebra_checks(report, "source", phi.source());
    }
    if already != Some(phi.target()) && phi.target() != phi.source() {
        algebra_checks(report, "target", phi.target());
    }
    morphism_check(report, phi);
}

fn validate(loader: &mut Loader, report: &mut Report, algebra: &Path, morphism: Option<&Path>, module: Option<&Path>) -> Result<(), CliError> {
    let a = loader.algebra("algebra", algebra)?;
    algebra_checks(report, "algebra", &a);
    if let Some(m) = module {
        let r = loader.representation(m, &a)?;
        representation_check(report, &r);
    }
    if let Some(m) = morphism {
        let phi = loader.morphism(m, Some(algebra), Some(algebra), false)?;
        morphism_checks(report, &phi, Some(&a));
    }
    Ok(())
}

fn not_computed(report: &mut Report) {
    report.notes.push("inputs fail their axioms; nothing was computed".into());
}

/// Turns errors that mean the coboundary is not a differential into a
/// reported status.
fn convention_failure(report: &mut Report, e: Error) -> Result<(), CliError> {
    match e {
        Error::ConstraintViolation { .. } | Error::NotACochain { .. } | Error::NotAComplex { .. } => {
            report.status = Status::ConventionFailure;
            report.notes.push(format!("the coboundary under {} is not a differential here: {e}", report.convention));
            Ok(())
        }
        e => Err(e.into()),
    }
}

fn cohomology(loader: &mut Loader, report: &mut Report, conv: SignConvention, algebra: &Path, module: &str, degrees: Degrees) -> Result<(), CliError> {
    let a = loader.algebra("algebra", algebra)?;
    algebra_checks(report, "algebra", &a);
    let (rep, title) = if module == "adjoint" {
        (a.adjoint_representation(), "cohomology with adjoint coefficients".to_string())
    } else {
        let r = loader.representation(Path::new(module), &a)?;
        representation_check(report, &r);
        (r, format!("cohomology with coefficients in {module}"))
    };
    if !report.all_passed() {
        not_computed(report);
        return Ok(());
    }
    let top = (degrees.hi + 1).max(3);
    let complex = match CochainComplex::new(&rep, conv, top) {
        Ok(c) => c,
        Err(e) => return convention_failure(report, e),
    };
    let bad: Vec<usize> = (2..top).filter(|&p| !complex.differential(p).mul(complex.differential(p - 1)).map(|m| m.is_zero()).unwrap_or(false)).collect();
    let detail = format!("degrees 1..{}", top - 1);
    if !bad.is_empty() {
        report.check(Check { name: "coboundary squares to zero".into(), passed: false, detail: Some(format!("fails after degrees {bad:?}")), violations: vec![] });
        report.status = Status::ConventionFailure;
        return Ok(());
    }
    report.check(Check { name: "coboundary squares to zero".into(), passed: true, detail: Some(detail), violations: vec![] });
    let mut rows = Vec::new();
    for p in degrees.lo..=degrees.hi {
        let h = match complex.cohomology_dim(p) {
            Ok(h) => h,
            Err(e) => return convention_failure(report, e),
        };
        rows.push(vec![p.to_string(), complex.space(p).dim().to_string(), complex.rank(p).to_string(), h.to_string()]);
    }
    report.tables.push(Table { title, columns: cols(&["p", "dim C^p", "rank d^p", "dim H^p"]), rows });
    Ok(())
}

fn cols(names: &[&str]) -> Vec<String> {
    names.iter().map(|s| s.to_string()).collect()
}

fn morphism_cohomology(loader: &mut Loader, report: &mut Report, conv: SignConvention, files: &[PathBuf], degrees: Degrees) -> Result<(), CliError> {
    let phi = match files {
        [m] => loader.morphism(m, None, None, false)?,
        [s, t, m] => loader.morphism(m, Some(s), Some(t), true)?,
        _ => return Err(CliError::Usage("morphism-cohomology takes MORPHISM or SOURCE TARGET MORPHISM".into())),
    };
    morphism_checks(report, &phi, None);
    if !report.all_passed() {
        not_computed(report);
        return Ok(());
    }
    let top = degrees.hi + 1;
    let mc = match MorphismComplex::new(&phi, conv, top) {
        Ok(c) => c,
        Err(e) => return convention_failure(report, e),
    };
    let bad: Vec<usize> = (2..top).filter(|&p| !mc.differential(p).mul(mc.differential(p - 1)).map(|m| m.is_zero()).unwrap_or(false)).collect();
    if !bad.is_empty() {
        report.check(Check { name: "differential squares to zero".into(), passed: false, detail: Some(format!("fails after degrees {bad:?}")), violations: vec![] });
        report.status = Status::ConventionFailure;
        return Ok(());
    }
    if top > 2 {
        report.check(Check { name: "differential squares to zero".into(), passed: true, detail: Some(format!("degrees 1..{}", top - 1)), violations: vec![] });
    }
    let mut rows = Vec::new();
    let mut transfer = Vec::new();
    let mut transfer_ok = true;
    for p in degrees.lo..=degrees.hi {
        let computed = (|| -> homleib_core::Result<(usize, usize, usize, usize)> {
            let h = mc.cohomology_dim(p)?;
            let hl = mc.source_complex().cohomology_dim(p)?;
            let hm = mc.target_complex().cohomology_dim(p)?;
            let hlm = if p == 1 { 0 } else { mc.mixed_complex().cohomology_dim(p - 1)? };
            Ok((h, hl, hm, hlm))
        })();
        let (h, hl, hm, hlm) = match computed {
            Ok(v) => v,
            Err(e) => return convention_failure(report, e),
        };
        let verdict = if hl + hm + hlm == 0 {
            let ok = h == 0 && witnesses_exist(&mc, p)?;
            transfer_ok &= ok;
            transfer.push(p);
            if ok { "verified" } else { "FAILED" }
        } else {
            "-"
        };
        let (a, b, c) = mc.block_dims(p);
        let rank = if p < top { homleib_core::linalg::rank(mc.differential(p)) } else { 0 };
        rows.push(vec![
            p.to_string(),
            mc.dim(p).to_string(),
            format!("{a}+{b}+{c}"),
            rank.to_string(),
            h.to_string(),
            hl.to_string(),
            hm.to_string(),
            hlm.to_string(),
            verdict.to_string(),
        ]);
    }
    report.tables.push(Table {
        title: "cohomology of the morphism".into(),
        columns: cols(&["p", "dim C^p(phi)", "blocks", "rank d^p", "dim H^p(phi)", "H^p(L,L)", "H^p(M,M)", "H^(p-1)(L,M)", "transfer"]),
        rows,
    });
    if !transfer.is_empty() {
        report.check(Check {
            name: "vanishing transfer".into(),
            passed: transfer_ok,
            detail: Some(format!("hypotheses hold in degrees {transfer:?}")),
            violations: vec![],
        });
        report.notes.push(
            "transfer: where H^p(L,L), H^p(M,M) and H^(p-1)(L,M) vanish, H^p(phi) must vanish and every cocycle gets an explicit preimage".into(),
        );
    }
    Ok(())
}

/// Whether every cocycle in a basis of `ker d^p` has a verified preimage.
fn witnesses_exist(mc: &MorphismComplex, p: usize) -> Result<bool, CliError> {
    for z in kernel_basis(mc.differential(p)).vectors() {
        let c = mc.element(p, z);
        let b = mc.vanishing_transfer_witness(&c)?;
        if p >= 2 && mc.apply(&b)? != c {
            return Ok(false);
        }
        if p == 1 && !c.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

fn support(t: &Tensor) -> (usize, Scalar) {
    let nonzero: Vec<&Scalar> = t.data().iter().filter(|x| !num_traits::Zero::is_zero(*x)).collect();
    let l1 = nonzero.iter().fold(homleib_core::scalar::zero(), |acc, x| acc + x.abs());
    (nonzero.len(), l1)
}

fn named(name: String, t: &Tensor, slots: &[&[String]], output: &[String]) -> NamedTensor {
    NamedTensor { name, entries: doc::tensor_to_sparse(t, slots, output) }
}

#[allow(clippy::too_many_arguments)]
fn deform(
    loader: &mut Loader,
    report: &mut Report,
    conv: SignConvention,
    action: DeformAction,
    path: &Path,
    l: usize,
    mode: RestrictedSum,
    output: Option<&Path>,
) -> Result<(), CliError> {
    let md = loader.deformation(path)?;
    morphism_checks(report, md.morphism(), None);
    if !report.all_passed() {
        not_computed(report);
        return Ok(());
    }
    if action != DeformAction::Check && l == 0 {
        return Err(CliError::Usage("obstructions and extensions start at order 1".into()));
    }
    let phi = md.morphism().clone();
    let (ll, ml) = (phi.source().labels().to_vec(), phi.target().labels().to_vec());
    let n = phi.source().arity();
    match action {
        DeformAction::Check => {
            let padded = md.pad(l);
            let mut rows = Vec::new();
            for k in 0..=l {
                let (a, b, c) = morphism_order_residual(&padded, k);
                let (sa, sb, sc) = (support(&a).0, support(&b).0, support(&c).0);
                let passed = sa + sb + sc == 0;
                rows.push(vec![k.to_string(), sa.to_string(), sb.to_string(), sc.to_string(), if passed { "pass" } else { "FAIL" }.into()]);
                report.check(Check { name: format!("order {k} equations"), passed, detail: None, violations: vec![] });
            }
            report.tables.push(Table {
                title: "nonzero residual entries by order".into(),
                columns: cols(&["order", "xi", "eta", "phi", "verdict"]),
                rows,
            });
            if md.order() > l {
                report.notes.push(format!("coefficients above order {l} were not checked"));
            }
        }
        DeformAction::Obstruct | DeformAction::Extend => {
            if !md.valid_through(l - 1) {
                report.check(Check {
                    name: format!("valid through order {}", l - 1),
                    passed: false,
                    detail: Some("run `deform check` for the failing orders".into()),
                    violations: vec![],
                });
                return Ok(());
            }
            if action == DeformAction::Obstruct {
                obstruct(report, conv, &md, l, mode, &ll, &ml, n)?;
            } else {
                extend(report, conv, &md, l, &ll, &ml, n, path, output)?;
            }
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn obstruct(report: &mut Report, conv: SignConvention, md: &MorphismDeformation, l: usize, mode: RestrictedSum, ll: &[String], ml: &[String], n: usize) -> Result<(), CliError> {
    let f = obstruction(md, l, mode)?;
    let mut rows = Vec::new();
    for (name, t) in [("O1", &f.o1), ("O2", &f.o2), ("O3", &f.o3)] {
        let (count, l1) = support(t);
        rows.push(vec![name.to_string(), format!("{:?}", t.dims()), count.to_string(), to_text(&l1)]);
    }
    report.tables.push(Table { title: format!("obstruction F_{l}"), columns: cols(&["component", "shape", "nonzero entries", "sum of |entries|"]), rows });
    let wide_l = vec![ll; 2 * n - 1];
    let wide_m = vec![ml; 2 * n - 1];
    let narrow = vec![ll; n];
    report.tensors.push(named(format!("O1 (order {l})"), &f.o1, &wide_l, ll));
    report.tensors.push(named(format!("O2 (order {l})"), &f.o2, &wide_m, ml));
    report.tensors.push(named(format!("O3 (order {l})"), &f.o3, &narrow, ml));

    let reps = homleib_core::morphism_complex::MorphismReps::new(md.morphism())?;
    let (a, b, c) = differential_tensors(md.morphism(), &reps, &conv, 3, &f.o1, &f.o2, Some(&f.o3));
    let cocycle = a.is_zero() && b.is_zero() && c.is_zero();
    report.notes.push(format!("d(F_{l}) {} zero (reported only, not a pass condition)", if cocycle { "is" } else { "is not" }));
    if mode == RestrictedSum::ThreeSums {
        report.notes.push("F_l uses the three-sum enumeration; the extension verdict below always uses each tuple once".into());
    }
    match solve_extension(md, l, &conv)? {
        Extension::Extends { .. } => {
            report.check(Check { name: format!("F_{l} is a coboundary"), passed: true, detail: Some(format!("order-{l} triple exists")), violations: vec![] });
        }
        Extension::Obstructed => {
            report.check(Check { name: format!("F_{l} is a coboundary"), passed: false, detail: Some(format!("no order-{l} triple")), violations: vec![] });
            report.status = Status::Obstructed;
        }
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn extend(
    report: &mut Report,
    conv: SignConvention,
    md: &MorphismDeformation,
    l: usize,
    ll: &[String],
    ml: &[String],
    n: usize,
    path: &Path,
    output: Option<&Path>,
) -> Result<(), CliError> {
    if md.order() >= l {
        report.notes.push(format!("the document's coefficients of order {l} and above were discarded"));
    }
    match solve_extension(md, l, &conv)? {
        Extension::Obstructed => {
            report.check(Check { name: format!("extension to order {l}"), passed: false, detail: Some("obstructed".into()), violations: vec![] });
            report.status = Status::Obstructed;
        }
        Extension::Extends { xi, eta, map, deformation } => {
            let (a, b, c) = morphism_order_residual(&deformation, l);
            let passed = a.is_zero() && b.is_zero() && c.is_zero();
            report.check(Check { name: format!("extension to order {l}"), passed, detail: Some(format!("order-{l} residuals re-evaluated")), violations: vec![] });
            report.tensors.push(named(format!("xi_{l}"), &xi, &vec![ll; n], ll));
            report.tensors.push(named(format!("eta_{l}"), &eta, &vec![ml; n], ml));
            report.tensors.push(named(format!("phi_{l}"), &Tensor::from_matrix(&map), &[ll], ml));
            if let Some(out) = output {
                let reference = output_reference(path, out)?;
                let text = doc::to_string(&DeformationDocument::from_deformation(&deformation, reference));
                std::fs::write(out, text).map_err(|source| CliError::Io { path: out.display().to_string(), source })?;
                report.notes.push(format!("extended deformation written to {}", out.display()));
            }
        }
    }
    Ok(())
}

/// The morphism reference for a document written to `out`: unchanged when
/// `out` sits next to the input, absolute otherwise.
fn output_reference(input: &Path, out: &Path) -> Result<String, CliError> {
    let reference = Loader::deformation_reference(input)?;
    let dir = |p: &Path| p.parent().map(Path::to_path_buf).unwrap_or_default();
    if Path::new(&reference).is_absolute() || dir(input) == dir(out) {
        return Ok(reference);
    }
    let resolved = dir(input).join(&reference);
    let absolute = resolved.canonicalize().map_err(|source| CliError::Io { path: resolved.display().to_string(), source })?;
    Ok(absolute.display().to_string())
}
