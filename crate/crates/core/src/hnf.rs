//! Hermite normal form representatives of `p`-power-index sublattices and the
//! exact closure tests on them.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::modular::{checked_pow, require_prime};
use crate::ring::StructureRing;

/// Lower-triangular basis matrix with diagonal `p^k_i`; entry `(i, j)` for
/// `j < i` lies in `[0, p^k_j)`. Rows `v_1, ..., v_d` span the lattice.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HnfRep {
    p: u64,
    diag: Vec<u32>,
    below: Vec<Vec<u64>>,
}

impl HnfRep {
    /// `below[i]` holds the `i` entries of row `i` left of the diagonal.
    pub fn new(p: u64, diag: Vec<u32>, below: Vec<Vec<u64>>) -> Result<Self> {
        require_prime(p)?;
        if diag.is_empty() {
            return Err(Error::InvalidRank(0));
        }
        if below.len() != diag.len() {
            return Err(Error::DimensionMismatch {
                expected: diag.len(),
                found: below.len(),
            });
        }
        let pk = diag
            .iter()
            .map(|&k| checked_pow(p, k).ok_or(Error::ModulusTooLarge { p, m: k }))
            .collect::<Result<Vec<_>>>()?;
        for (i, row) in below.iter().enumerate() {
            if row.len() != i {
                return Err(Error::DimensionMismatch {
                    expected: i,
                    found: row.len(),
                });
            }
            for (j, &x) in row.iter().enumerate() {
                if x >= pk[j] {
                    return Err(Error::Parse(format!(
                        "entry ({},{}) = {x} is not reduced mod {}",
                        i + 1,
                        j + 1,
                        pk[j]
                    )));
                }
            }
        }
        Ok(HnfRep { p, diag, below })
    }

    /// The full lattice: every `k_i = 0`.
    pub fn full(p: u64, d: usize) -> Result<Self> {
        HnfRep::new(p, vec![0; d], (0..d).map(|i| vec![0; i]).collect())
    }

    pub(crate) fn from_parts_unchecked(p: u64, diag: Vec<u32>, below: Vec<Vec<u64>>) -> Self {
        HnfRep { p, diag, below }
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn rank(&self) -> usize {
        self.diag.len()
    }

    pub fn diag(&self) -> &[u32] {
        &self.diag
    }

    /// Entry `x[i][j]` for `j < i` (zero-based).
    pub fn entry(&self, i: usize, j: usize) -> u64 {
        self.below[i][j]
    }

    /// `log_p` of the index.
    pub fn index_exponent(&self) -> u32 {
        self.diag.iter().sum()
    }

    /// Row `i` as an exact integer vector.
    pub fn row(&self, i: usize) -> Vec<BigInt> {
        let d = self.rank();
        let mut v = vec![BigInt::zero(); d];
        for (j, &x) in self.below[i].iter().enumerate() {
            v[j] = BigInt::from(x);
        }
        v[i] = BigInt::from(self.p).pow(self.diag[i]);
        v
    }

    pub fn rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rank()).map(|i| self.row(i)).collect()
    }

    pub fn to_json(&self) -> Value {
        let rows: Vec<Vec<String>> = self
            .rows()
            .iter()
            .map(|r| r.iter().map(ToString::to_string).collect())
            .collect();
        json!({ "p": self.p, "diag": self.diag, "rows": rows })
    }
}

fn check_dims(ring: &StructureRing, rep: &HnfRep) -> Result<()> {
    if ring.rank() != rep.rank() {
        return Err(Error::DimensionMismatch {
            expected: ring.rank(),
            found: rep.rank(),
        });
    }
    Ok(())
}

/// Back-substitution from the last coordinate down; `w` is in the lattice iff
/// every residual coordinate `k` is divisible by `p^k_k`.
fn in_lattice(rows: &[Vec<BigInt>], mut w: Vec<BigInt>) -> bool {
    for k in (0..rows.len()).rev() {
        let (q, r) = w[k].div_rem(&rows[k][k]);
        if !r.is_zero() {
            return false;
        }
        if q.is_zero() {
            continue;
        }
        for (t, wt) in w.iter_mut().enumerate().take(k + 1) {
            *wt -= &q * &rows[k][t];
        }
    }
    true
}

/// Is the lattice spanned by `rep` closed under the ring multiplication?
pub fn closure_check(ring: &StructureRing, rep: &HnfRep) -> Result<bool> {
    check_dims(ring, rep)?;
    let rows = rep.rows();
    for i in 0..rows.len() {
        for j in i..rows.len() {
            if !in_lattice(&rows, ring.multiply(&rows[i], &rows[j])) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Does the lattice spanned by `rep` contain the ring's identity?
pub fn unital_check(ring: &StructureRing, rep: &HnfRep) -> Result<bool> {
    check_dims(ring, rep)?;
    Ok(in_lattice(&rep.rows(), ring.identity().to_vec()))
}
