//! JSON documents for algebras, morphisms, representations and deformations.
//!
//! Rationals are strings (`"3"`, `"-3/2"`). Multilinear maps are sparse maps
//! from comma-joined input labels to `{output label: coefficient}`; missing
//! entries are zero. Matrices are lists of rows, and column `j` holds the
//! image of basis vector `j`. A matrix may also be `"identity"` or `"zero"`.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use homleib_core::deformation::MorphismDeformation;
use homleib_core::scalar::{parse, to_text};
use homleib_core::{HomNaryAlgebra, Matrix, Morphism, Representation, Scalar, Tensor};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

/// `"x,y" -> {"z": "c"}`: the value on the inputs `x, y` has coefficient
/// `c` on `z`.
pub type Sparse = BTreeMap<String, BTreeMap<String, String>>;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum MatrixSpec {
    /// `"identity"`, `"zero"`, or `"inherit"` for the order-0 map of a
    /// deformation.
    Keyword(String),
    Rows(Vec<Vec<String>>),
}

/// A deformation coefficient: a sparse bracket, `"inherit"` (order 0 only)
/// or `"zero"`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Keyword(String),
    Bracket(Sparse),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub arity: usize,
    pub basis: Vec<String>,
    pub alpha: MatrixSpec,
    #[serde(default)]
    pub bracket: Sparse,
}

/// A linear map between algebras given by file references, resolved
/// relative to the morphism document.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MorphismDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub source: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<String>,
    pub matrix: MatrixSpec,
}

/// A module over the algebra given on the command line. Action `i` takes the
/// module element in input position `i`, so its keys carry a module label at
/// that position and algebra labels elsewhere.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RepresentationDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub basis: Vec<String>,
    pub alpha: MatrixSpec,
    pub actions: Vec<Sparse>,
}

/// Coefficient lists of a morphism deformation, starting at order 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DeformationDocument {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub morphism: String,
    pub xi: Vec<Coefficient>,
    pub eta: Vec<Coefficient>,
    pub maps: Vec<MatrixSpec>,
}

/// A file that was read, with the digest of its exact bytes.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Input {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

fn invalid(path: &str, message: impl Into<String>) -> CliError {
    CliError::Invalid { path: path.to_string(), message: message.into() }
}

/// Parses a document from text, reporting syntax and type errors with line
/// and column.
pub fn from_str<T: DeserializeOwned>(path: &str, text: &str) -> Result<T, CliError> {
    serde_json::from_str(text).map_err(|e| CliError::Parse {
        path: path.to_string(),
        line: e.line(),
        column: e.column(),
        message: strip_position(&e.to_string()),
    })
}

fn strip_position(message: &str) -> String {
    match message.rfind(" at line ") {
        Some(i) => message[..i].to_string(),
        None => message.to_string(),
    }
}

pub fn to_string<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

pub fn digest(bytes: &[u8]) -> String {
    format!("{:x}", Sha256::digest(bytes))
}

fn scalar(path: &str, at: &str, text: &str) -> Result<Scalar, CliError> {
    parse(text).ok_or_else(|| invalid(path, format!("{at}: {text:?} is not an exact rational")))
}

fn check_labels(path: &str, what: &str, labels: &[String]) -> Result<(), CliError> {
    if labels.is_empty() {
        return Err(invalid(path, format!("{what} is empty")));
    }
    for (i, l) in labels.iter().enumerate() {
        if l.is_empty() || l.contains(',') || l.trim() != l {
            return Err(invalid(path, format!("{what} label {l:?} must be nonempty, without commas or surrounding spaces")));
        }
        if labels[..i].contains(l) {
            return Err(invalid(path, format!("{what} label {l:?} is repeated")));
        }
    }
    Ok(())
}

fn index_of(path: &str, at: &str, labels: &[String], label: &str) -> Result<usize, CliError> {
    labels.iter().position(|l| l == label).ok_or_else(|| invalid(path, format!("{at}: unknown label {label:?}")))
}

/// Dense tensor from a sparse map; `slots` are the label sets of the inputs.
pub fn sparse_to_tensor(path: &str, at: &str, sparse: &Sparse, slots: &[&[String]], output: &[String]) -> Result<Tensor, CliError> {
    let mut dims: Vec<usize> = slots.iter().map(|s| s.len()).collect();
    dims.push(output.len());
    let mut t = Tensor::zeros(dims);
    for (key, values) in sparse {
        let names: Vec<&str> = key.split(',').map(str::trim).collect();
        if names.len() != slots.len() {
            return Err(invalid(path, format!("{at}.{key:?}: expected {} comma-separated labels", slots.len())));
        }
        let mut index = names
            .iter()
            .zip(slots)
            .map(|(name, labels)| index_of(path, &format!("{at}.{key:?}"), labels, name))
            .collect::<Result<Vec<_>, _>>()?;
        index.push(0);
        for (out, c) in values {
            let k = index_of(path, &format!("{at}.{key:?}"), output, out)?;
            *index.last_mut().unwrap() = k;
            t.set(&index, scalar(path, &format!("{at}.{key:?}.{out:?}"), c)?);
        }
    }
    Ok(t)
}

/// Sparse form of a tensor with canonical rationals and no zero entries.
pub fn tensor_to_sparse(t: &Tensor, slots: &[&[String]], output: &[String]) -> Sparse {
    let mut sparse = Sparse::new();
    let out = output.len();
    for (offset, chunk) in t.data().chunks(out.max(1)).enumerate() {
        if chunk.iter().all(|x| x == &homleib_core::scalar::zero()) {
            continue;
        }
        let index = t.multi_index(offset * out);
        let key = index[..slots.len()].iter().zip(slots).map(|(&i, labels)| labels[i].as_str()).collect::<Vec<_>>().join(",");
        let entry = sparse.entry(key).or_default();
        for (k, c) in chunk.iter().enumerate() {
            if c != &homleib_core::scalar::zero() {
                entry.insert(output[k].clone(), to_text(c));
            }
        }
    }
    sparse
}

/// `rows x cols` matrix; keywords other than `identity` and `zero` are
/// rejected.
pub fn matrix(path: &str, at: &str, spec: &MatrixSpec, rows: usize, cols: usize) -> Result<Matrix, CliError> {
    match spec {
        MatrixSpec::Keyword(k) if k == "zero" => Ok(Matrix::zeros(rows, cols)),
        MatrixSpec::Keyword(k) if k == "identity" => {
            if rows != cols {
                return Err(invalid(path, format!("{at}: identity needs a square matrix, here {rows}x{cols}")));
            }
            Ok(Matrix::identity(rows))
        }
        MatrixSpec::Keyword(k) => Err(invalid(path, format!("{at}: unknown keyword {k:?}"))),
        MatrixSpec::Rows(r) => {
            if r.len() != rows || r.iter().any(|row| row.len() != cols) {
                return Err(invalid(path, format!("{at}: expected a {rows}x{cols} matrix")));
            }
            let mut m = Matrix::zeros(rows, cols);
            for (i, row) in r.iter().enumerate() {
                for (j, c) in row.iter().enumerate() {
                    m.set(i, j, scalar(path, &format!("{at}[{i}][{j}]"), c)?);
                }
            }
            Ok(m)
        }
    }
}

pub fn matrix_spec(m: &Matrix) -> MatrixSpec {
    if m.is_identity() {
        MatrixSpec::Keyword("identity".into())
    } else if m.is_zero() {
        MatrixSpec::Keyword("zero".into())
    } else {
        MatrixSpec::Rows((0..m.rows()).map(|i| m.row(i).iter().map(to_text).collect()).collect())
    }
}

impl AlgebraDocument {
    pub fn to_algebra(&self, path: &str) -> Result<HomNaryAlgebra, CliError> {
        check_labels(path, "basis", &self.basis)?;
        if self.arity < 2 {
            return Err(invalid(path, format!("arity {} is below 2", self.arity)));
        }
        let d = self.basis.len();
        let alpha = matrix(path, "alpha", &self.alpha, d, d)?;
        let slots = vec![self.basis.as_slice(); self.arity];
        let bracket = sparse_to_tensor(path, "bracket", &self.bracket, &slots, &self.basis)?;
        HomNaryAlgebra::new(self.arity, self.basis.clone(), bracket, alpha).map_err(|e| invalid(path, e.to_string()))
    }

    pub fn from_algebra(a: &HomNaryAlgebra) -> Self {
        let slots = vec![a.labels(); a.arity()];
        AlgebraDocument {
            name: None,
            arity: a.arity(),
            basis: a.labels().to_vec(),
            alpha: matrix_spec(a.alpha()),
            bracket: tensor_to_sparse(a.bracket(), &slots, a.labels()),
        }
    }
}

impl MorphismDocument {
    pub fn to_morphism(&self, path: &str, source: HomNaryAlgebra, target: HomNaryAlgebra) -> Result<Morphism, CliError> {
        let m = matrix(path, "matrix", &self.matrix, target.dim(), source.dim())?;
        Morphism::new(source, target, m).map_err(|e| invalid(path, e.to_string()))
    }

    pub fn from_morphism(phi: &Morphism, source: Option<String>, target: Option<String>) -> Self {
        MorphismDocument { name: None, source, target, matrix: matrix_spec(phi.matrix()) }
    }
}

impl RepresentationDocument {
    pub fn to_representation(&self, path: &str, algebra: &HomNaryAlgebra) -> Result<Representation, CliError> {
        check_labels(path, "basis", &self.basis)?;
        let n = algebra.arity();
        if self.actions.len() != n {
            return Err(invalid(path, format!("{} actions given, the algebra has arity {n}", self.actions.len())));
        }
        let m = self.basis.len();
        let alpha = matrix(path, "alpha", &self.alpha, m, m)?;
        let actions = self
            .actions
            .iter()
            .enumerate()
            .map(|(i, s)| {
                let slots: Vec<&[String]> = (0..n).map(|k| if k == i { self.basis.as_slice() } else { algebra.labels() }).collect();
                sparse_to_tensor(path, &format!("actions[{i}]"), s, &slots, &self.basis)
            })
            .collect::<Result<Vec<_>, _>>()?;
        Representation::new(algebra.clone(), self.basis.clone(), alpha, actions).map_err(|e| invalid(path, e.to_string()))
    }

    pub fn from_representation(r: &Representation) -> Self {
        let n = r.algebra().arity();
        let actions = r
            .actions()
            .iter()
            .enumerate()
            .map(|(i, t)| {
                let slots: Vec<&[String]> = (0..n).map(|k| if k == i { r.labels() } else { r.algebra().labels() }).collect();
                tensor_to_sparse(t, &slots, r.labels())
            })
            .collect();
        RepresentationDocument { name: None, basis: r.labels().to_vec(), alpha: matrix_spec(r.alpha_m()), actions }
    }
}

fn coefficients(path: &str, what: &str, list: &[Coefficient], algebra: &HomNaryAlgebra) -> Result<Vec<Tensor>, CliError> {
    let slots = vec![algebra.labels(); algebra.arity()];
    let mut out = Vec::new();
    for (i, c) in list.iter().enumerate() {
        let at = format!("{what}[{i}]");
        let t = match c {
            Coefficient::Keyword(k) if k == "inherit" && i == 0 => algebra.bracket().clone(),
            Coefficient::Keyword(k) if k == "zero" => Tensor::zeros(algebra.bracket().dims().to_vec()),
            Coefficient::Keyword(k) => return Err(invalid(path, format!("{at}: keyword {k:?} is not allowed here"))),
            Coefficient::Bracket(s) => sparse_to_tensor(path, &at, s, &slots, algebra.labels())?,
        };
        if i == 0 && &t != algebra.bracket() {
            return Err(invalid(path, format!("{at}: order 0 must equal the bracket of the algebra (or be \"inherit\")")));
        }
        out.push(t);
    }
    if out.is_empty() {
        out.push(algebra.bracket().clone());
    }
    Ok(out)
}

impl DeformationDocument {
    pub fn to_deformation(&self, path: &str, phi: Morphism) -> Result<MorphismDeformation, CliError> {
        let xi = coefficients(path, "xi", &self.xi, phi.source())?;
        let eta = coefficients(path, "eta", &self.eta, phi.target())?;
        let (dl, dm) = (phi.source().dim(), phi.target().dim());
        let mut maps = Vec::new();
        for (i, spec) in self.maps.iter().enumerate() {
            let at = format!("maps[{i}]");
            let m = match spec {
                MatrixSpec::Keyword(k) if k == "inherit" && i == 0 => phi.matrix().clone(),
                MatrixSpec::Keyword(k) if k == "identity" && i > 0 => {
                    return Err(invalid(path, format!("{at}: \"identity\" is only meaningful at order 0")))
                }
                _ => matrix(path, &at, spec, dm, dl)?,
            };
            if i == 0 && &m != phi.matrix() {
                return Err(invalid(path, format!("{at}: order 0 must equal the morphism matrix (or be \"inherit\")")));
            }
            maps.push(m);
        }
        let maps = maps.into_iter().skip(1).collect();
        MorphismDeformation::new(phi, xi[1..].to_vec(), eta[1..].to_vec(), maps).map_err(|e| invalid(path, e.to_string()))
    }

    /// Document for `md`; order 0 is written as `"inherit"`.
    pub fn from_deformation(md: &MorphismDeformation, morphism: String) -> Self {
        let coeffs = |d: &homleib_core::deformation::TruncatedDeformation| {
            let a = d.base();
            let slots = vec![a.labels(); a.arity()];
            core::iter::once(Coefficient::Keyword("inherit".into()))
                .chain(d.coeffs()[1..].iter().map(|t| Coefficient::Bracket(tensor_to_sparse(t, &slots, a.labels()))))
                .collect()
        };
        let maps = core::iter::once(MatrixSpec::Keyword("inherit".into())).chain(md.maps()[1..].iter().map(matrix_spec)).collect();
        DeformationDocument { name: None, morphism, xi: coeffs(md.xi()), eta: coeffs(md.eta()), maps }
    }
}

/// Reads documents from disk, resolving references relative to the file that
/// makes them and recording a digest for every file read.
#[derive(Debug, Default)]
pub struct Loader {
    inputs: Vec<Input>,
}

fn resolve(base: &Path, reference: &str) -> PathBuf {
    let r = Path::new(reference);
    if r.is_absolute() {
        r.to_path_buf()
    } else {
        base.parent().unwrap_or(Path::new("")).join(r)
    }
}

impl Loader {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn inputs(&self) -> &[Input] {
        &self.inputs
    }

    pub fn into_inputs(self) -> Vec<Input> {
        self.inputs
    }

    fn read<T: DeserializeOwned>(&mut self, role: &str, path: &Path) -> Result<T, CliError> {
        let shown = path.display().to_string();
        let bytes = std::fs::read(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
        let text = std::str::from_utf8(&bytes).map_err(|e| invalid(&shown, format!("not UTF-8: {e}")))?;
        let doc = from_str(&shown, text)?;
        let input = Input { role: role.to_string(), path: shown, sha256: digest(&bytes) };
        if !self.inputs.contains(&input) {
            self.inputs.push(input);
        }
        Ok(doc)
    }

    pub fn algebra(&mut self, role: &str, path: &Path) -> Result<HomNaryAlgebra, CliError> {
        let doc: AlgebraDocument = self.read(role, path)?;
        doc.to_algebra(&path.display().to_string())
    }

    pub fn representation(&mut self, path: &Path, algebra: &HomNaryAlgebra) -> Result<Representation, CliError> {
        let doc: RepresentationDocument = self.read("representation", path)?;
        doc.to_representation(&path.display().to_string(), algebra)
    }

    /// A morphism. The given `source`/`target` paths replace the references
    /// in the document when `prefer_given`, and otherwise only fill in
    /// missing ones.
    pub fn morphism(&mut self, path: &Path, source: Option<&Path>, target: Option<&Path>, prefer_given: bool) -> Result<Morphism, CliError> {
        let doc: MorphismDocument = self.read("morphism", path)?;
        let shown = path.display().to_string();
        let pick = |given: Option<&Path>, reference: &Option<String>, what: &str| -> Result<PathBuf, CliError> {
            match (given, reference) {
                (Some(p), Some(_)) if prefer_given => Ok(p.to_path_buf()),
                (_, Some(r)) => Ok(resolve(path, r)),
                (Some(p), None) => Ok(p.to_path_buf()),
                (None, None) => Err(invalid(&shown, format!("no {what} algebra given"))),
            }
        };
        let s = pick(source, &doc.source, "source")?;
        let t = pick(target, &doc.target, "target")?;
        let source = self.algebra("source", &s)?;
        let target = self.algebra("target", &t)?;
        doc.to_morphism(&shown, source, target)
    }

    pub fn deformation(&mut self, path: &Path) -> Result<MorphismDeformation, CliError> {
        let doc: DeformationDocument = self.read("deformation", path)?;
        let phi = self.morphism(&resolve(path, &doc.morphism), None, None, false)?;
        doc.to_deformation(&path.display().to_string(), phi)
    }

    /// The morphism reference of a deformation document, as written.
    pub fn deformation_reference(path: &Path) -> Result<String, CliError> {
        let shown = path.display().to_string();
        let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: shown.clone(), source })?;
        let doc: DeformationDocument = from_str(&shown, &text)?;
        Ok(doc.morphism)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use homleib_core::fixtures;

    #[test]
    fn digest_matches_known_vector() {
        assert_eq!(digest(b"abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    }

    #[test]
    fn algebra_round_trip() {
        for a in fixtures::battery().into_iter().chain([fixtures::ee_f_ff_e(), fixtures::lie3_twisted()]) {
            let a = HomNaryAlgebra::new(a.arity(), (0..a.dim()).map(|i| format!("x{i}")).collect(), a.bracket().clone(), a.alpha().clone())
                .unwrap();
            let doc = AlgebraDocument::from_algebra(&a);
            let text = to_string(&doc);
            let back: AlgebraDocument = from_str("mem", &text).unwrap();
            assert_eq!(back, doc);
            assert_eq!(back.to_algebra("mem").unwrap(), a);
        }
    }

    #[test]
    fn rationals_are_canonicalised() {
        let text = r#"{"arity": 2, "basis": ["e", "f"], "alpha": [["2/4", "0"], ["0", "1"]], "bracket": {"f,f": {"e": "-6/4", "f": "0"}}}"#;
        let doc: AlgebraDocument = from_str("mem", text).unwrap();
        let again = AlgebraDocument::from_algebra(&doc.to_algebra("mem").unwrap());
        assert_eq!(again.alpha, MatrixSpec::Rows(vec![vec!["1/2".into(), "0".into()], vec!["0".into(), "1".into()]]));
        assert_eq!(again.bracket["f,f"], BTreeMap::from([("e".to_string(), "-3/2".to_string())]));
    }

    #[test]
    fn syntax_errors_carry_positions() {
        let text = "{\n  \"arity\": 2,\n  \"basis\": [\"e\" \"f\"]\n}";
        match from_str::<AlgebraDocument>("a.json", text) {
            Err(CliError::Parse { line, column, .. }) => assert_eq!((line, column), (3, 17)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn semantic_errors_name_the_entry() {
        let text = r#"{"arity": 2, "basis": ["e", "f"], "alpha": "identity", "bracket": {"f,g": {"e": "1"}}}"#;
        let doc: AlgebraDocument = from_str("a.json", text).unwrap();
        let err = doc.to_algebra("a.json").unwrap_err().to_string();
        assert!(err.contains("unknown label \"g\""), "{err}");
        let text = r#"{"arity": 2, "basis": ["e", "f"], "alpha": "identity", "bracket": {"f,f": {"e": "1/0"}}}"#;
        let doc: AlgebraDocument = from_str("a.json", text).unwrap();
        assert!(doc.to_algebra("a.json").is_err());
    }

    #[test]
    fn representation_round_trip() {
        let a = fixtures::sl2_twisted();
        let r = a.adjoint_representation();
        let doc = RepresentationDocument::from_representation(&r);
        let back: RepresentationDocument = from_str("mem", &to_string(&doc)).unwrap();
        assert_eq!(back.to_representation("mem", &a).unwrap(), r);
    }

    #[test]
    fn deformation_round_trip() {
        let phi = &fixtures::morphisms()[3];
        let mut x = Tensor::zeros(vec![2, 2, 2]);
        x.set(&[0, 1, 1], homleib_core::scalar::ratio(5, 3));
        let mut m = Matrix::zeros(2, 2);
        m.set(1, 0, homleib_core::scalar::int(-2));
        let md = MorphismDeformation::new(phi.clone(), vec![x.clone()], vec![Tensor::zeros(vec![2, 2, 2]), x], vec![m]).unwrap();
        let doc = DeformationDocument::from_deformation(&md, "phi.json".into());
        let back: DeformationDocument = from_str("mem", &to_string(&doc)).unwrap();
        assert_eq!(back, doc);
        assert_eq!(back.to_deformation("mem", phi.clone()).unwrap(), md);
    }
}
