//! Restriction of scalars from a finite field `L = F_{p^d}` to its prime
//! field `K = F_p`.

use alloc::format;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::algebra::linalg;
use crate::algebra::{Algebra, AlgebraError, Field, MultiPoly, Ring, Scalar, Variables};

use super::SegreError;

/// A `K`-basis `e_1..e_d` of `L` with structure constants
/// `e_i·e_j = Σ_k table[i][j][k]·e_k`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicationTable {
    ext: Field,
    base: Field,
    basis: Vec<Scalar>,
    table: Vec<Vec<Vec<Scalar>>>,
    /// Rows: coordinates of `w^i` (the internal power basis) in `e`.
    to_basis: linalg::Matrix,
}

/// Coordinates of an `L`-element in the power basis `1, w, …, w^{d−1}`.
fn power_coords(ext: &Field, a: &Scalar) -> Vec<Scalar> {
    let p = ext.characteristic();
    let d = ext.degree();
    let Scalar::Residue(code) = a else {
        unreachable!("finite field element")
    };
    (0..d)
        .map(|i| Scalar::Residue((code / p.pow(i)) % p))
        .collect()
}

impl MultiplicationTable {
    /// Structure constants computed from the basis.
    pub fn from_basis(ext: &Field, basis: Vec<Scalar>) -> Result<Self, SegreError> {
        if !ext.is_finite() {
            return Err(SegreError::Algebra(AlgebraError::UnsupportedField(
                ext.designator(),
            )));
        }
        let base = ext.prime_subfield();
        let d = ext.degree() as usize;
        if basis.len() != d {
            return Err(SegreError::InconsistentTable);
        }
        // columns are basis vectors in power coordinates
        let cols: linalg::Matrix = basis.iter().map(|e| power_coords(ext, e)).collect();
        let m: linalg::Matrix = (0..d)
            .map(|r| (0..d).map(|c| cols[c][r].clone()).collect())
            .collect();
        let inv = linalg::inverse(&base, &m).map_err(|_| SegreError::InconsistentTable)?;
        let to_basis: linalg::Matrix = (0..d)
            .map(|c| (0..d).map(|r| inv[r][c].clone()).collect())
            .collect();
        let mut t = MultiplicationTable {
            ext: ext.clone(),
            base,
            basis,
            table: Vec::new(),
            to_basis,
        };
        t.table = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| t.coords(&ext.mul(&t.basis[i], &t.basis[j])))
                    .collect()
            })
            .collect();
        Ok(t)
    }

    /// A user-supplied table, accepted only if it matches the products of
    /// the basis elements in `L`.
    pub fn with_table(
        ext: &Field,
        basis: Vec<Scalar>,
        table: Vec<Vec<Vec<Scalar>>>,
    ) -> Result<Self, SegreError> {
        let t = Self::from_basis(ext, basis)?;
        if t.table != table {
            return Err(SegreError::InconsistentTable);
        }
        Ok(t)
    }

    pub fn degree(&self) -> usize {
        self.basis.len()
    }

    pub fn base(&self) -> &Field {
        &self.base
    }

    pub fn ext(&self) -> &Field {
        &self.ext
    }

    pub fn basis(&self) -> &[Scalar] {
        &self.basis
    }

    pub fn table(&self) -> &[Vec<Vec<Scalar>>] {
        &self.table
    }

    /// `K`-coordinates of `a` in the basis `e`.
    pub fn coords(&self, a: &Scalar) -> Vec<Scalar> {
        let pc = power_coords(&self.ext, a);
        let d = self.degree();
        (0..d)
            .map(|k| {
                (0..d).fold(self.base.zero(), |acc, i| {
                    self.base
                        .add(&acc, &self.base.mul(&pc[i], &self.to_basis[i][k]))
                })
            })
            .collect()
    }

    /// `Σ c_k·e_k`.
    pub fn combine(&self, c: &[Scalar]) -> Scalar {
        c.iter()
            .zip(&self.basis)
            .fold(self.ext.zero(), |acc, (ck, e)| {
                // ck lies in the prime field, whose codes coincide in K and L
                self.ext.add(&acc, &self.ext.mul(ck, e))
            })
    }
}

/// An element of `L ⊗ K[y]` written in the basis `e`.
#[derive(Clone, Debug, PartialEq)]
struct Split {
    table: Arc<MultiplicationTable>,
    comps: Vec<MultiPoly>,
}

impl Algebra for Split {
    fn zero_like(&self) -> Self {
        Split {
            table: self.table.clone(),
            comps: self.comps.iter().map(|c| c.zero_like()).collect(),
        }
    }

    fn one_like(&self) -> Self {
        let one = self.table.coords(&self.table.ext.one());
        Split {
            table: self.table.clone(),
            comps: self
                .comps
                .iter()
                .zip(one)
                .map(|(c, o)| MultiPoly::constant(self.table.base.clone(), c.vars().clone(), o))
                .collect(),
        }
    }

    fn is_zero(&self) -> bool {
        self.comps.iter().all(|c| c.is_zero())
    }

    fn add(&self, other: &Self) -> Self {
        Split {
            table: self.table.clone(),
            comps: self
                .comps
                .iter()
                .zip(&other.comps)
                .map(|(a, b)| a.add(b))
                .collect(),
        }
    }

    fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    fn neg(&self) -> Self {
        Split {
            table: self.table.clone(),
            comps: self.comps.iter().map(|c| c.neg()).collect(),
        }
    }

    fn mul(&self, other: &Self) -> Self {
        let d = self.comps.len();
        let mut out: Vec<MultiPoly> = self.comps.iter().map(|c| c.zero_like()).collect();
        for i in 0..d {
            if self.comps[i].is_zero() {
                continue;
            }
            for j in 0..d {
                if other.comps[j].is_zero() {
                    continue;
                }
                let prod = self.comps[i].mul(&other.comps[j]);
                for (k, c) in self.table.table[i][j].iter().enumerate() {
                    if !self.table.base.is_zero(c) {
                        out[k] = out[k].add(&prod.scale(c));
                    }
                }
            }
        }
        Split {
            table: self.table.clone(),
            comps: out,
        }
    }

    fn try_div(&self, _other: &Self) -> Result<Self, AlgebraError> {
        Err(AlgebraError::NotDivisible)
    }
}

/// Variables `y1..y{d·n}`; `x_i = Σ_j e_j·y_{(i−1)d + j}`.
pub fn weil_variables(n: usize, d: usize) -> Variables {
    Variables::new((1..=n * d).map(|i| format!("y{i}")))
}

/// Restricts each equation over `L` to `d` equations over `K` in `d·n`
/// variables; the output lists the components of the first equation, then
/// the second, and so on.
pub fn weil_restrict(
    equations: &[MultiPoly],
    table: &MultiplicationTable,
) -> Result<Vec<MultiPoly>, SegreError> {
    let d = table.degree();
    let Some(first) = equations.first() else {
        return Ok(Vec::new());
    };
    let n = first.nvars();
    if equations
        .iter()
        .any(|f| f.vars() != first.vars() || f.ring() != &table.ext)
    {
        return Err(SegreError::Algebra(AlgebraError::VariableMismatch));
    }
    let vars = weil_variables(n, d);
    let shared = Arc::new(table.clone());
    let zero = MultiPoly::zero(table.base.clone(), vars.clone());
    let args: Vec<Split> = (0..n)
        .map(|i| Split {
            table: shared.clone(),
            comps: (0..d)
                .map(|j| MultiPoly::var(table.base.clone(), vars.clone(), i * d + j))
                .collect(),
        })
        .collect();
    let embed = |c: &Scalar| Split {
        table: shared.clone(),
        comps: table
            .coords(c)
            .into_iter()
            .map(|x| MultiPoly::constant(table.base.clone(), vars.clone(), x))
            .collect(),
    };
    let mut out = Vec::with_capacity(d * equations.len());
    for f in equations {
        if f.is_zero() {
            out.extend(vec![zero.clone(); d]);
            continue;
        }
        out.extend(f.eval_in(&args, embed).comps);
    }
    Ok(out)
}
