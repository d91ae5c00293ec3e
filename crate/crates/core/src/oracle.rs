//! Deliberately naive reference implementations: lattice membership by
//! rational linear algebra and subring counting at arbitrary index over `Z`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hnf::HnfRep;
use crate::ring::StructureRing;

/// Default cap on candidate matrices for [`count_global`].
pub const DEFAULT_ORACLE_BUDGET: u128 = 100_000_000;

/// Integer lower-triangular basis with positive diagonal `d_i` and entry
/// `(i, j)` in `[0, d_j)` below it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GlobalHnf {
    diag: Vec<u64>,
    below: Vec<Vec<u64>>,
}

impl GlobalHnf {
    pub fn new(diag: Vec<u64>, below: Vec<Vec<u64>>) -> Result<Self> {
        if diag.is_empty() {
            return Err(Error::InvalidRank(0));
        }
        if below.len() != diag.len() || diag.contains(&0) {
            return Err(Error::DimensionMismatch {
                expected: diag.len(),
                found: below.len(),
            });
        }
        for (i, row) in below.iter().enumerate() {
            if row.len() != i || row.iter().zip(&diag).any(|(x, d)| x >= d) {
                return Err(Error::Parse(format!("row {} is not reduced", i + 1)));
            }
        }
        Ok(GlobalHnf { diag, below })
    }

    pub fn diag(&self) -> &[u64] {
        &self.diag
    }

    pub fn determinant(&self) -> BigInt {
        self.diag.iter().map(|&d| BigInt::from(d)).product()
    }
}

/// Something spanned by the rows of a square integer matrix.
pub trait Lattice {
    fn basis(&self) -> Vec<Vec<BigInt>>;
    /// Coefficients must be integral, or only integral at this prime.
    fn local_prime(&self) -> Option<u64>;
}

impl Lattice for HnfRep {
    fn basis(&self) -> Vec<Vec<BigInt>> {
        self.rows()
    }
    fn local_prime(&self) -> Option<u64> {
        Some(self.p())
    }
}

impl Lattice for GlobalHnf {
    fn basis(&self) -> Vec<Vec<BigInt>> {
        let d = self.diag.len();
        (0..d)
            .map(|i| {
                let mut v = vec![BigInt::zero(); d];
                for (j, &x) in self.below[i].iter().enumerate() {
                    v[j] = BigInt::from(x);
                }
                v[i] = BigInt::from(self.diag[i]);
                v
            })
            .collect()
    }
    fn local_prime(&self) -> Option<u64> {
        None
    }
}

/// Integral membership for a lower-triangular basis by exact back-substitution.
/// `None` when the basis is not lower triangular with non-zero diagonal.
fn triangular_integral(basis: &[Vec<BigInt>], w: &[BigInt]) -> Option<bool> {
    let d = basis.len();
    let lower =
        (0..d).all(|i| !basis[i][i].is_zero() && basis[i][i + 1..].iter().all(Zero::is_zero));
    if !lower {
        return None;
    }
    let mut rest = w.to_vec();
    for i in (0..d).rev() {
        let (c, r) = rest[i].div_rem(&basis[i][i]);
        if !r.is_zero() {
            return Some(false);
        }
        if !c.is_zero() {
            for (x, b) in rest[..i].iter_mut().zip(&basis[i][..i]) {
                *x -= &c * b;
            }
        }
    }
    Some(true)
}

/// Solve `sum_k c_k b_k = w` over `Q` by Gauss-Jordan elimination on the
/// transposed basis. `None` if the basis is singular or there is no solution.
fn solve_rational(basis: &[Vec<BigInt>], w: &[BigInt]) -> Option<Vec<BigRational>> {
    let d = basis.len();
    // augmented matrix: row r is coordinate r, column k is basis vector k
    let mut a: Vec<Vec<BigRational>> = (0..d)
        .map(|r| {
            let mut row: Vec<BigRational> = (0..d)
                .map(|k| BigRational::from_integer(basis[k][r].clone()))
                .collect();
            row.push(BigRational::from_integer(w[r].clone()));
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = a[col][col].recip();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..d {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in col..=d {
                    let t = &a[col][c] * &f;
                    a[r][c] -= t;
                }
            }
        }
    }
    Some(
        a.into_iter()
            .map(|mut row| row.pop().expect("augmented"))
            .collect(),
    )
}

/// Is `v` an integral (or `p`-integral) combination of the lattice basis?
pub fn lattice_contains<L: Lattice + ?Sized>(lattice: &L, v: &[BigInt]) -> Result<bool> {
    let basis = lattice.basis();
    if v.len() != basis.len() {
        return Err(Error::DimensionMismatch {
            expected: basis.len(),
            found: v.len(),
        });
    }
    if lattice.local_prime().is_none() {
        if let Some(ok) = triangular_integral(&basis, v) {
            return Ok(ok);
        }
    }
    let Some(c) = solve_rational(&basis, v) else {
        return Ok(false);
    };
    Ok(match lattice.local_prime() {
        None => c.iter().all(|x| x.denom().is_one()),
        Some(p) => {
            let pb = BigInt::from(p);
            c.iter().all(|x| !x.denom().is_multiple_of(&pb))
        }
    })
}

/// Closed under multiplication (and containing the identity, if asked)?
pub fn oracle_accepts<L: Lattice>(ring: &StructureRing, lattice: &L, unital: bool) -> Result<bool> {
    let basis = lattice.basis();
    for i in 0..basis.len() {
        for j in i..basis.len() {
            if !lattice_contains(lattice, &ring.multiply(&basis[i], &basis[j]))? {
                return Ok(false);
            }
        }
    }
    if unital && !lattice_contains(lattice, ring.identity())? {
        return Ok(false);
    }
    Ok(true)
}

/// Ordered `d`-tuples of positive integers with product `k`.
pub fn divisor_tuples(k: u64, d: usize) -> Vec<Vec<u64>> {
    fn rec(k: u64, d: usize, cur: &mut Vec<u64>, out: &mut Vec<Vec<u64>>) {
        if d == 1 {
            cur.push(k);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for a in (1..=k).filter(|a| k.is_multiple_of(*a)) {
            cur.push(a);
            rec(k / a, d - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 && k > 0 {
        rec(k, d, &mut Vec::new(), &mut out);
    }
    out
}

/// Candidate matrices with this diagonal: `prod_j d_j^(rows below j)`.
fn candidates(diag: &[u64]) -> u128 {
    let d = diag.len();
    diag.iter().enumerate().fold(1u128, |acc, (j, &x)| {
        acc.saturating_mul((x as u128).saturating_pow((d - 1 - j) as u32))
    })
}

/// Number of index-`k` subrings of `ring` (containing the identity if `unital`).
pub fn count_global(ring: &StructureRing, k: u64, unital: bool) -> Result<u64> {
    count_global_with_budget(ring, k, unital, DEFAULT_ORACLE_BUDGET)
}

pub fn count_global_with_budget(
    ring: &StructureRing,
    k: u64,
    unital: bool,
    budget: u128,
) -> Result<u64> {
    if k == 0 {
        return Err(Error::Parse("index must be at least 1".into()));
    }
    let d = ring.rank();
    let tuples = divisor_tuples(k, d);
    let needed = tuples
        .iter()
        .fold(0u128, |acc, t| acc.saturating_add(candidates(t)));
    if needed > budget {
        return Err(Error::BudgetExceeded {
            what: format!("oracle enumeration at index {k}"),
            needed,
            budget,
        });
    }
    let counts: Vec<u64> = tuples
        .par_iter()
        .map(|diag| count_with_diagonal(ring, diag, unital))
        .collect::<Result<_>>()?;
    Ok(counts.iter().sum())
}

fn count_with_diagonal(ring: &StructureRing, diag: &[u64], unital: bool) -> Result<u64> {
    let d = diag.len();
    let slots: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let mut below: Vec<Vec<u64>> = (0..d).map(|i| vec![0; i]).collect();
    let mut count = 0;
    loop {
        let h = GlobalHnf {
            diag: diag.to_vec(),
            below: below.clone(),
        };
        if oracle_accepts(ring, &h, unital)? {
            count += 1;
        }
        let mut advanced = false;
        for &(i, j) in slots.iter().rev() {
            below[i][j] += 1;
            if below[i][j] < diag[j] {
                advanced = true;
                break;
            }
            below[i][j] = 0;
        }
        if !advanced {
            return Ok(count);
        }
    }
}
