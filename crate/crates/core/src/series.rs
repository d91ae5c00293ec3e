//! Global counting functions assembled from local counts, and asymptotic fits.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::count::Counter;
use crate::error::{Error, Result};
use crate::modular::{primes_up_to, require_prime};
use crate::poly::IntPoly;
use crate::ring::{make_monogenic_ring, make_split_ring, make_unramified_product, SplittingType};

/// Residue degrees of `poly` mod `p`, for `p` not dividing the discriminant.
pub fn splitting_type_of(poly: &IntPoly, p: u64) -> Result<SplittingType> {
    require_prime(p)?;
    if !poly.is_monic() {
        return Err(Error::NotMonic(poly.to_string()));
    }
    let fp = poly.reduce_mod(p);
    if !fp.is_squarefree() {
        return Err(Error::RamifiedPrime {
            p,
            poly: poly.to_string(),
        });
    }
    SplittingType::new(fp.factor_degrees())
}

/// Which counting function to assemble.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Family {
    /// Orders of `Z^d`: unital subrings of the split ring.
    Split(usize),
    /// Orders of `Z[x]/(f)` at unramified primes.
    Monogenic(IntPoly),
}

impl Family {
    /// Degree of the ambient algebra.
    pub fn degree(&self) -> usize {
        match self {
            Family::Split(d) => *d,
            Family::Monogenic(f) => f.degree(),
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Family::Split(d) => write!(f, "split:{d}"),
            Family::Monogenic(p) => write!(f, "monogenic:{p}"),
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    /// `split:<d>` or `monogenic:<monic polynomial in x>`.
    fn from_str(s: &str) -> Result<Self> {
        let (kind, arg) = s
            .split_once(':')
            .ok_or_else(|| Error::Parse(format!("family {s:?} is not kind:argument")))?;
        match kind.trim() {
            "split" => {
                let d: usize = arg
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad rank {arg:?}")))?;
                if d == 0 || d > 12 {
                    return Err(Error::InvalidRank(d));
                }
                Ok(Family::Split(d))
            }
            "monogenic" => {
                let f: IntPoly = arg.trim().parse()?;
                if !f.is_monic() {
                    return Err(Error::NotMonic(f.to_string()));
                }
                if f.degree() > 12 {
                    return Err(Error::InvalidRank(f.degree()));
                }
                Ok(Family::Monogenic(f))
            }
            other => Err(Error::Parse(format!("unknown family kind {other:?}"))),
        }
    }
}

/// What to do at primes dividing the discriminant of a monogenic family.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub enum RamifiedPolicy {
    /// Fail with a ramified-prime error.
    #[default]
    Error,
    /// Leave the prime out (its local factor is treated as 1) and record a notice.
    Exclude,
    /// Take the local coefficients from a user-supplied table.
    Sidecar(BTreeMap<u64, Vec<BigUint>>),
    /// Count directly on `Z[x]/(f)` at that prime.
    Direct,
}

/// Local coefficients keyed by prime, `{"local": {"2": [1, 1, 3], ...}}`;
/// entries are non-negative integers or decimal strings and must start with 1.
pub fn parse_sidecar(text: &str) -> Result<BTreeMap<u64, Vec<BigUint>>> {
    let v: Value = serde_json::from_str(text)?;
    let local = v
        .get("local")
        .and_then(Value::as_object)
        .ok_or_else(|| Error::Parse("sidecar needs an object field \"local\"".into()))?;
    let mut out = BTreeMap::new();
    for (key, coeffs) in local {
        let p: u64 = key
            .parse()
            .map_err(|_| Error::Parse(format!("sidecar key {key:?} is not a prime")))?;
        require_prime(p)?;
        let arr = coeffs
            .as_array()
            .ok_or_else(|| Error::Parse(format!("sidecar entry for {p} is not an array")))?;
        let vals = arr
            .iter()
            .map(|c| match c {
                Value::Number(n) => n
                    .as_u64()
                    .map(BigUint::from)
                    .ok_or_else(|| Error::Parse(format!("bad coefficient {n}"))),
                Value::String(s) if !s.is_empty() && s.bytes().all(|b| b.is_ascii_digit()) => s
                    .parse::<BigUint>()
                    .map_err(|e| Error::Parse(format!("bad coefficient {s:?}: {e}"))),
                other => Err(Error::Parse(format!("bad coefficient {other}"))),
            })
            .collect::<Result<Vec<_>>>()?;
        if vals.first().is_some_and(|a| !a.is_one()) {
            return Err(Error::Parse(format!(
                "local factor at {p} must start with 1"
            )));
        }
        out.insert(p, vals);
    }
    Ok(out)
}

#[derive(Clone, Debug)]
pub struct SeriesProfile {
    pub family: String,
    pub bound: u64,
    /// Largest exponent used at any prime.
    pub m_max: u32,
    /// `f[k]` for `1 <= k <= bound`; `f[0]` is unused and zero.
    pub f: Vec<BigUint>,
    /// `n[k] = f[1] + ... + f[k]`.
    pub n: Vec<BigUint>,
    /// Local coefficient vectors actually used, keyed by prime.
    pub local: BTreeMap<u64, Vec<BigUint>>,
    pub excluded: Vec<u64>,
    pub notices: Vec<String>,
}

impl SeriesProfile {
    /// Rows `k,f(k),N(k)` with a header.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("k,f,N\n");
        for k in 1..=self.bound as usize {
            s.push_str(&format!("{k},{},{}\n", self.f[k], self.n[k]));
        }
        s
    }

    /// Recompute `f(ab) = f(a) f(b)` over every coprime pair with `ab <= limit`.
    /// Returns the first failing pair.
    pub fn first_multiplicativity_failure(&self, limit: u64) -> Option<(u64, u64)> {
        let limit = limit.min(self.bound);
        for a in 2..=limit {
            for b in a + 1..=limit / a {
                if num_integer::gcd(a, b) == 1
                    && self.f[(a * b) as usize] != &self.f[a as usize] * &self.f[b as usize]
                {
                    return Some((a, b));
                }
            }
        }
        None
    }
}

/// Largest `m` with `p^m <= bound`.
fn max_exponent(p: u64, bound: u64) -> u32 {
    let mut m = 0;
    let mut q = 1u64;
    while let Some(next) = q.checked_mul(p) {
        if next > bound {
            break;
        }
        q = next;
        m += 1;
    }
    m
}

enum Local {
    Coeffs(Vec<BigUint>),
    Excluded,
}

fn local_coeffs(
    family: &Family,
    p: u64,
    m: u32,
    policy: &RamifiedPolicy,
    counter: &Counter,
) -> Result<Local> {
    match family {
        Family::Split(d) => {
            let ring = make_split_ring(*d)?;
            Ok(Local::Coeffs(
                counter.local_factor_coeffs(&ring, p, m, true)?,
            ))
        }
        Family::Monogenic(f) => match splitting_type_of(f, p) {
            Ok(ty) => {
                let ring = make_unramified_product(p, &ty)?;
                Ok(Local::Coeffs(
                    counter.local_factor_coeffs(&ring, p, m, true)?,
                ))
            }
            Err(Error::RamifiedPrime { .. }) => match policy {
                RamifiedPolicy::Error => Err(Error::RamifiedPrime {
                    p,
                    poly: f.to_string(),
                }),
                RamifiedPolicy::Exclude => Ok(Local::Excluded),
                RamifiedPolicy::Direct => {
                    let ring = make_monogenic_ring(f)?;
                    Ok(Local::Coeffs(
                        counter.local_factor_coeffs(&ring, p, m, true)?,
                    ))
                }
                RamifiedPolicy::Sidecar(map) => {
                    let have = map.get(&p).map_or(0, Vec::len);
                    if have as u32 > m {
                        Ok(Local::Coeffs(map[&p][..=m as usize].to_vec()))
                    } else {
                        Err(Error::MissingLocalData(
                            (have as u32..=m).map(|mm| (p, mm)).collect(),
                        ))
                    }
                }
            },
            Err(e) => Err(e),
        },
    }
}

/// `f(k)` for `k <= bound` by the Euler product of local coefficient vectors.
pub fn assemble_counts(
    family: &Family,
    bound: u64,
    policy: &RamifiedPolicy,
    counter: &Counter,
) -> Result<SeriesProfile> {
    if bound == 0 {
        return Err(Error::InsufficientSamples(
            "bound must be at least 1".into(),
        ));
    }
    if bound > 50_000_000 {
        return Err(Error::BudgetExceeded {
            what: "series length".into(),
            needed: bound as u128,
            budget: 50_000_000,
        });
    }
    let primes = primes_up_to(bound);
    let results: Vec<(u64, Result<Local>)> = primes
        .par_iter()
        .map(|&p| {
            (
                p,
                local_coeffs(family, p, max_exponent(p, bound), policy, counter),
            )
        })
        .collect();
    let mut local = BTreeMap::new();
    let mut excluded = Vec::new();
    let mut missing = Vec::new();
    for (p, r) in results {
        match r {
            Ok(Local::Coeffs(c)) => {
                local.insert(p, c);
            }
            Ok(Local::Excluded) => excluded.push(p),
            Err(Error::MissingLocalData(keys)) => missing.extend(keys),
            Err(e) => return Err(e),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingLocalData(missing));
    }
    let mut notices = Vec::new();
    if !excluded.is_empty() {
        notices.push(format!(
            "ramified primes excluded (local factor taken as 1): {}",
            excluded
                .iter()
                .map(u64::to_string)
                .collect::<Vec<_>>()
                .join(", ")
        ));
    }

    let b = bound as usize;
    let mut spf = vec![0u32; b + 1];
    for &p in &primes {
        let mut q = p as usize;
        while q <= b {
            if spf[q] == 0 {
                spf[q] = p as u32;
            }
            q += p as usize;
        }
    }
    let mut f = vec![BigUint::zero(); b + 1];
    if b >= 1 {
        f[1] = BigUint::one();
    }
    for k in 2..=b {
        let p = spf[k] as usize;
        let (mut rest, mut e) = (k, 0usize);
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        f[k] = match local.get(&(p as u64)) {
            Some(c) => &f[rest] * &c[e],
            None => BigUint::zero(),
        };
    }
    let mut n = vec![BigUint::zero(); b + 1];
    for k in 1..=b {
        n[k] = &n[k - 1] + &f[k];
    }
    Ok(SeriesProfile {
        family: family.to_string(),
        bound,
        m_max: max_exponent(2, bound),
        f,
        n,
        local,
        excluded,
        notices,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct AsymptoticFit {
    pub alpha: f64,
    pub beta: u32,
    pub c: f64,
    pub residual: f64,
    pub b_range: (u64, u64),
    pub samples: usize,
}

impl AsymptoticFit {
    pub fn to_json(&self) -> Value {
        json!({
            "alpha": self.alpha,
            "beta": self.beta,
            "C": self.c,
            "residual": self.residual,
            "B_range": [self.b_range.0, self.b_range.1],
            "samples": self.samples,
            "window": "top decade, log-spaced samples",
        })
    }
}

/// Least-squares `C` in `N(B) ~ C B^alpha (log B)^(beta-1)` over the top decade,
/// with the largest relative deviation there as the residual.
pub fn fit_log_power(profile: &SeriesProfile, alpha: f64, beta: u32) -> Result<AsymptoticFit> {
    fit_partial_sums(&profile.n, profile.bound, alpha, beta)
}

/// The same fit for an arbitrary partial-sum vector `n[1..=bound]`.
pub fn fit_partial_sums(n: &[BigUint], bound: u64, alpha: f64, beta: u32) -> Result<AsymptoticFit> {
    if bound < 100 {
        return Err(Error::InsufficientSamples(format!(
            "fit needs B >= 100, got {bound}"
        )));
    }
    if beta == 0 || !alpha.is_finite() {
        return Err(Error::Parse("beta must be >= 1 and alpha finite".into()));
    }
    let lo = bound.div_ceil(10);
    let steps = 64;
    let mut xs: Vec<u64> = (0..=steps)
        .map(|i| {
            let t = i as f64 / steps as f64;
            ((lo as f64) * (bound as f64 / lo as f64).powf(t)).round() as u64
        })
        .map(|x| x.clamp(lo, bound))
        .collect();
    xs.dedup();
    let g = |x: u64| (x as f64).powf(alpha) * (x as f64).ln().powi(beta as i32 - 1);
    let val = |x: u64| n[x as usize].to_f64().unwrap_or(f64::INFINITY);
    let (num, den) = xs.iter().fold((0.0, 0.0), |(a, b), &x| {
        (a + val(x) * g(x), b + g(x) * g(x))
    });
    if den == 0.0 {
        return Err(Error::InsufficientSamples("degenerate fit".into()));
    }
    let c = num / den;
    let residual = xs
        .iter()
        .map(|&x| ((val(x) - c * g(x)) / val(x)).abs())
        .fold(0.0, f64::max);
    Ok(AsymptoticFit {
        alpha,
        beta,
        c,
        residual,
        b_range: (lo, bound),
        samples: xs.len(),
    })
}
