use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use super::{combine, kernel, rref, RatMatrix, RatVector, Rational};
use crate::error::WonderError;

/// A linear subspace of `Q^n`, stored by its unique reduced row echelon basis.
///
/// Two subspaces are equal exactly when their basis matrices are identical,
/// so `Subspace` can be hashed and used as a set key.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace {
    ambient: usize,
    basis: RatMatrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RatMatrix::zeros(0, ambient),
            pivots: Vec::new(),
        }
    }

    pub fn full(ambient: usize) -> Self {
        Subspace {
            ambient,
            basis: RatMatrix::identity(ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// Row space of `m`.
    pub fn row_space(m: &RatMatrix) -> Self {
        let (basis, pivots) = rref(m);
        Subspace {
            ambient: m.cols(),
            basis,
            pivots,
        }
    }

    /// Span of the given vectors (any number, possibly dependent).
    pub fn span(ambient: usize, vectors: Vec<RatVector>) -> Self {
        let m = RatMatrix::from_rows(ambient, vectors).expect("vector length must match ambient");
        Self::row_space(&m)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn codim(&self) -> usize {
        self.ambient - self.dim()
    }

    pub fn basis(&self) -> &RatMatrix {
        &self.basis
    }

    pub fn basis_vectors(&self) -> Vec<RatVector> {
        self.basis.row_vectors()
    }

    pub fn pivots(&self) -> &[usize] {
        &self.pivots
    }

    pub fn is_zero(&self) -> bool {
        self.dim() == 0
    }

    pub fn is_full(&self) -> bool {
        self.dim() == self.ambient
    }

    fn check_ambient(&self, other: &Subspace) -> Result<(), WonderError> {
        if self.ambient == other.ambient {
            Ok(())
        } else {
            Err(WonderError::Dimension(format!(
                "subspaces live in Q^{} and Q^{}",
                self.ambient, other.ambient
            )))
        }
    }

    pub fn sum(&self, other: &Subspace) -> Result<Subspace, WonderError> {
        self.check_ambient(other)?;
        Ok(Self::row_space(&self.basis.vstack(&other.basis)))
    }

    /// `A ∩ B`, computed as the common kernel of both annihilator bases.
    pub fn intersect(&self, other: &Subspace) -> Result<Subspace, WonderError> {
        self.check_ambient(other)?;
        if self.is_full() {
            return Ok(other.clone());
        }
        if other.is_full() {
            return Ok(self.clone());
        }
        let eqs = self.quotient_coords().vstack(&other.quotient_coords());
        Ok(kernel(&eqs))
    }

    /// True iff `other ⊆ self`.
    pub fn contains(&self, other: &Subspace) -> Result<bool, WonderError> {
        self.check_ambient(other)?;
        if other.dim() > self.dim() {
            return Ok(false);
        }
        Ok(other.basis.row_vectors().iter().all(|v| self.contains_vector(v)))
    }

    /// Membership test by reduction against the echelon basis.
    pub fn contains_vector(&self, v: &[Rational]) -> bool {
        assert_eq!(v.len(), self.ambient, "vector length must match ambient");
        let mut rest = v.to_vec();
        for (row, &p) in self.pivots.iter().enumerate() {
            let f = rest[p].clone();
            if f.is_zero() {
                continue;
            }
            for (j, b) in self.basis.row(row).iter().enumerate() {
                if !b.is_zero() {
                    rest[j] -= &f * b;
                }
            }
        }
        rest.iter().all(Zero::is_zero)
    }

    /// Functionals vanishing on `self`, as a subspace of the dual (same coordinates).
    pub fn annihilator(&self) -> Subspace {
        kernel(&self.basis)
    }

    /// A `codim × ambient` matrix whose kernel is exactly `self`: the rows are
    /// the canonical annihilator basis. `Q v` represents `v` in `V / self`.
    pub fn quotient_coords(&self) -> RatMatrix {
        self.annihilator().basis
    }

    /// Lift of quotient coordinates back into `V`: the unique vector supported
    /// on the annihilator's pivot columns with `Q v = q`.
    pub fn lift_from_quotient(&self, q: &[Rational]) -> RatVector {
        let ann = self.annihilator();
        let mut v = vec![Rational::zero(); self.ambient];
        for (&p, x) in ann.pivots.iter().zip(q) {
            v[p] = x.clone();
        }
        v
    }

    /// `g · self`.
    pub fn image(&self, g: &RatMatrix) -> Subspace {
        let rows = self.basis.row_vectors().iter().map(|b| g.mul_vec(b)).collect();
        Subspace::span(self.ambient, rows)
    }

    /// Whether the subspace is spanned by standard basis vectors.
    pub fn is_coordinate(&self) -> bool {
        (0..self.dim()).all(|i| {
            let row = self.basis.row(i);
            row.iter().filter(|x| !x.is_zero()).count() == 1 && row.iter().any(One::is_one)
        })
    }

    /// `sum coeffs[i] * basis[i]`.
    pub fn vector_from_coeffs(&self, coeffs: &[Rational]) -> RatVector {
        combine(self.ambient, coeffs, &self.basis.row_vectors())
    }

    /// Short human-readable form, e.g. `<(1,1,1)>` or `0`.
    pub fn describe(&self) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        if self.is_full() {
            return format!("Q^{}", self.ambient);
        }
        let rows: Vec<String> = self
            .basis
            .to_strings()
            .into_iter()
            .map(|r| format!("({})", r.join(",")))
            .collect();
        format!("<{}>", rows.join(", "))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Canonical total order: ambient, then dimension, then basis entries.
impl Ord for Subspace {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        (self.ambient, self.dim(), self.basis.entries()).cmp(&(other.ambient, other.dim(), other.basis.entries()))
    }
}

impl fmt::Debug for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Subspace({})", self.describe())
    }
}

#[derive(Serialize, Deserialize)]
struct SubspaceRepr {
    ambient_dim: usize,
    dim: usize,
    basis: Vec<Vec<String>>,
}

impl Serialize for Subspace {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        SubspaceRepr {
            ambient_dim: self.ambient,
            dim: self.dim(),
            basis: self.basis.to_strings(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Subspace {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let repr = SubspaceRepr::deserialize(d)?;
        let m = RatMatrix::from_strings(repr.ambient_dim, &repr.basis).map_err(serde::de::Error::custom)?;
        if m.cols() != repr.ambient_dim {
            return Err(serde::de::Error::custom("basis width differs from ambient_dim"));
        }
        Ok(Subspace::row_space(&m))
    }
}
