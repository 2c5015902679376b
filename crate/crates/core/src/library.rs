//! The file library and the bilinear product T(a, b) that all placement and
//! delivery expressions are written in.
//!
//! Each file is split into L subfiles and each subfile is exactly one GF(q)
//! symbol, so the library is an N × L symbol matrix. Load in units of file
//! size is then (symbols sent) / L.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::{Field, Gf};
use crate::matrix::Matrix;

/// N files of L one-symbol subfiles over GF(q).
#[derive(Clone, PartialEq, Debug)]
pub struct Library {
    field: Gf,
    symbols: Matrix<Gf>,
}

impl Library {
    pub fn new(field: Gf, symbols: Matrix<Gf>) -> Self {
        Library { field, symbols }
    }

    pub fn from_rows(field: Gf, rows: Vec<Vec<u64>>) -> Result<Self> {
        Ok(Library { field, symbols: Matrix::from_rows(field, rows)? })
    }

    pub fn random<R: rand::Rng + ?Sized>(field: Gf, n: usize, l: usize, rng: &mut R) -> Self {
        let symbols = Matrix::from_fn(field, n, l, |_, _| field.sample(rng));
        Library { field, symbols }
    }

    pub fn field(&self) -> Gf {
        self.field
    }

    /// Number of files N.
    pub fn num_files(&self) -> usize {
        self.symbols.rows()
    }

    /// Subpacketization L.
    pub fn subpacketization(&self) -> usize {
        self.symbols.cols()
    }

    pub fn symbol(&self, file: usize, slot: usize) -> u64 {
        *self.symbols.at(file, slot)
    }

    pub fn symbols(&self) -> &Matrix<Gf> {
        &self.symbols
    }

    /// Row-major flattening, one entry per (file, slot) pair.
    pub fn flat(&self) -> Vec<u64> {
        let (n, l) = (self.num_files(), self.subpacketization());
        let mut out = Vec::with_capacity(n * l);
        for f in 0..n {
            for s in 0..l {
                out.push(self.symbol(f, s));
            }
        }
        out
    }

    pub fn to_json(&self) -> String {
        let doc = LibraryJson {
            q: self.field.modulus(),
            n: self.num_files(),
            l: self.subpacketization(),
            symbols: self.flat(),
        };
        serde_json::to_string(&doc).expect("library serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let doc: LibraryJson = serde_json::from_str(text)?;
        let field = Gf::new(doc.q)?;
        if doc.symbols.len() != doc.n * doc.l {
            return Err(Error::DimensionMismatch(format!(
                "library JSON: {} symbols for {}x{}",
                doc.symbols.len(),
                doc.n,
                doc.l
            )));
        }
        let rows = doc
            .symbols
            .chunks(doc.l)
            .map(|r| r.iter().map(|v| field.elem(*v)).collect())
            .collect();
        Library::from_rows(field, rows)
    }
}

#[derive(Serialize, Deserialize)]
struct LibraryJson {
    q: u64,
    #[serde(rename = "N")]
    n: usize,
    #[serde(rename = "L")]
    l: usize,
    symbols: Vec<u64>,
}

/// The bilinear product T(a, b) = Σ_n Σ_j a_n · F_{n,j} · b_j.
pub fn bilinear(a: &[u64], b: &[u64], lib: &Library) -> Result<u64> {
    if a.len() != lib.num_files() || b.len() != lib.subpacketization() {
        return Err(Error::DimensionMismatch(format!(
            "bilinear: a has {} (want {}), b has {} (want {})",
            a.len(),
            lib.num_files(),
            b.len(),
            lib.subpacketization()
        )));
    }
    let f = lib.field();
    let mut acc = 0u64;
    for (n, an) in a.iter().enumerate() {
        if *an == 0 {
            continue;
        }
        let mut row = 0u64;
        for (j, bj) in b.iter().enumerate() {
            row = f.add(&row, &f.mul(&lib.symbol(n, j), bj));
        }
        acc = f.add(&acc, &f.mul(an, &row));
    }
    Ok(acc)
}

/// A linear functional of the N·L file symbols, indexed by (file, slot) in
/// row-major order. T(a, b) corresponds to the tensor a ⊗ b.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Functional {
    n: usize,
    l: usize,
    coeffs: Vec<u64>,
}

impl Functional {
    pub fn zero(n: usize, l: usize) -> Self {
        Functional { n, l, coeffs: vec![0; n * l] }
    }

    /// The tensor a ⊗ b with coefficient a_n · b_j at slot (n, j).
    pub fn tensor(a: &[u64], b: &[u64], field: &Gf) -> Self {
        let (n, l) = (a.len(), b.len());
        let mut coeffs = Vec::with_capacity(n * l);
        for an in a {
            for bj in b {
                coeffs.push(field.mul(an, bj));
            }
        }
        Functional { n, l, coeffs }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.n, self.l)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn add_assign(&mut self, other: &Functional, field: &Gf) {
        debug_assert_eq!((self.n, self.l), (other.n, other.l));
        for (c, o) in self.coeffs.iter_mut().zip(&other.coeffs) {
            *c = field.add(c, o);
        }
    }

    /// Evaluates against the flattened library; equals bilinear(a, b, lib)
    /// when the functional is the tensor a ⊗ b.
    pub fn evaluate(&self, lib: &Library) -> u64 {
        debug_assert_eq!((self.n, self.l), (lib.num_files(), lib.subpacketization()));
        let f = lib.field();
        let mut acc = 0u64;
        for (idx, c) in self.coeffs.iter().enumerate() {
            if *c == 0 {
                continue;
            }
            let sym = lib.symbol(idx / self.l, idx % self.l);
            acc = f.add(&acc, &f.mul(c, &sym));
        }
        acc
    }
}

/// Tensor coefficients of T(a, b) for the generic decoder.
pub fn functional_of(a: &[u64], b: &[u64], field: &Gf) -> Functional {
    Functional::tensor(a, b, field)
}

/// The demanded function ⟨d, F⟩ restricted to each subfile slot: entry ℓ is
/// Σ_n d_n · F_{n,ℓ}.
pub fn demanded_function(d: &[u64], lib: &Library) -> Result<Vec<u64>> {
    if d.len() != lib.num_files() {
        return Err(Error::DimensionMismatch(format!(
            "demand has length {}, library has {} files",
            d.len(),
            lib.num_files()
        )));
    }
    let f = lib.field();
    Ok((0..lib.subpacketization())
        .map(|slot| {
            d.iter()
                .enumerate()
                .fold(0u64, |acc, (n, dn)| f.add(&acc, &f.mul(dn, &lib.symbol(n, slot))))
        })
        .collect())
}

/// Unit vector e_i (0-based index) of the given length.
pub fn unit_vector(len: usize, i: usize) -> Vec<u64> {
    let mut v = vec![0u64; len];
    v[i] = 1;
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    fn lib_2x2_gf3() -> Library {
        let f = Gf::new(3).unwrap();
        Library::from_rows(f, vec![vec![1, 2], vec![0, 1]]).unwrap()
    }

    #[test]
    fn bilinear_on_unit_vectors_picks_subfiles() {
        let lib = lib_2x2_gf3();
        for i in 0..2 {
            for j in 0..2 {
                let a = unit_vector(2, i);
                let b = unit_vector(2, j);
                assert_eq!(bilinear(&a, &b, &lib).unwrap(), lib.symbol(i, j));
            }
        }
        assert_eq!(bilinear(&[0, 0], &[2, 1], &lib).unwrap(), 0);
    }

    #[test]
    fn bilinear_matches_term_by_term_sum() {
        let f = Gf::new(3).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(11);
        for _ in 0..20 {
            let lib = Library::random(f, 2, 2, &mut rng);
            let a = f.sample_vec(&mut rng, 2);
            let b = f.sample_vec(&mut rng, 2);
            let mut expect = 0u64;
            for n in 0..2 {
                for j in 0..2 {
                    expect = f.add(&expect, &f.mul(&f.mul(&a[n], &lib.symbol(n, j)), &b[j]));
                }
            }
            assert_eq!(bilinear(&a, &b, &lib).unwrap(), expect);
        }
    }

    #[test]
    fn functional_matches_bilinear_and_is_linear() {
        let f = Gf::new(5).unwrap();
        let mut rng = ChaCha20Rng::seed_from_u64(5);
        let lib = Library::random(f, 3, 4, &mut rng);
        for _ in 0..20 {
            let a = f.sample_vec(&mut rng, 3);
            let b = f.sample_vec(&mut rng, 4);
            let func = functional_of(&a, &b, &f);
            assert_eq!(func.evaluate(&lib), bilinear(&a, &b, &lib).unwrap());

            let a2 = f.sample_vec(&mut rng, 3);
            let lhs = functional_of(&f.add_vec(&a, &a2), &b, &f);
            let mut rhs = functional_of(&a, &b, &f);
            rhs.add_assign(&functional_of(&a2, &b, &f), &f);
            assert_eq!(lhs, rhs);
        }
        // e_1 ⊗ e_1 is the unit functional at position 0
        let e = functional_of(&unit_vector(3, 0), &unit_vector(4, 0), &f);
        assert_eq!(e.coeffs()[0], 1);
        assert!(e.coeffs()[1..].iter().all(|c| *c == 0));
    }

    #[test]
    fn demanded_function_rows_and_sums() {
        let lib = lib_2x2_gf3();
        assert_eq!(demanded_function(&[1, 0], &lib).unwrap(), vec![1, 2]);
        assert_eq!(demanded_function(&[0, 0], &lib).unwrap(), vec![0, 0]);

        let f = Gf::new(2).unwrap();
        let lib2 = Library::from_rows(f, vec![vec![1, 0, 1], vec![1, 1, 0]]).unwrap();
        // d = e_1 + e_2 over GF(2) is the XOR of the two rows
        assert_eq!(demanded_function(&[1, 1], &lib2).unwrap(), vec![0, 1, 1]);
    }

    #[test]
    fn json_round_trip() {
        let lib = lib_2x2_gf3();
        let text = lib.to_json();
        let back = Library::from_json(&text).unwrap();
        assert_eq!(back, lib);
        assert!(text.contains("\"N\":2"));
        assert!(text.contains("\"L\":2"));
    }
}
