//! Commutative rings with identity presented by integer structure constants.
//!
//! A ring of rank `d` is the free module `Z^d` with basis `e_1, ..., e_d` and
//! multiplication `e_i e_j = sum_k c[i][j][k] e_k`. Indices are zero-based in
//! code and one-based in everything a user reads or writes (ring-spec files,
//! violation reports).

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::modular::require_prime;
use crate::poly::{find_irreducible, IntPoly};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StructureRing {
    rank: usize,
    constants: Vec<BigInt>,
    identity: Vec<BigInt>,
    label: String,
}

/// First failing invariant found by [`StructureRing::validate`]. Indices are one-based.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Commutativity {
        i: usize,
        j: usize,
        k: usize,
    },
    Associativity {
        i: usize,
        j: usize,
        l: usize,
        coord: usize,
    },
    Identity {
        j: usize,
    },
    Shape(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Commutativity { i, j, k } => {
                write!(f, "commutativity violation at ({i},{j},{k})")
            }
            Violation::Associativity { i, j, l, coord } => write!(
                f,
                "associativity violation at ({i},{j},{l}), coordinate {coord}"
            ),
            Violation::Identity { j } => write!(f, "identity violation: e * e_{j} != e_{j}"),
            Violation::Shape(s) => write!(f, "malformed ring: {s}"),
        }
    }
}

impl StructureRing {
    /// Build from a dense tensor (`constants[(i*d + j)*d + k]`) without validating.
    pub fn from_dense(
        rank: usize,
        constants: Vec<BigInt>,
        identity: Vec<BigInt>,
        label: impl Into<String>,
    ) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        if constants.len() != rank * rank * rank {
            return Err(Error::DimensionMismatch {
                expected: rank * rank * rank,
                found: constants.len(),
            });
        }
        if identity.len() != rank {
            return Err(Error::DimensionMismatch {
                expected: rank,
                found: identity.len(),
            });
        }
        Ok(StructureRing {
            rank,
            constants,
            identity,
            label: label.into(),
        })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn identity(&self) -> &[BigInt] {
        &self.identity
    }

    #[inline]
    pub fn constant(&self, i: usize, j: usize, k: usize) -> &BigInt {
        &self.constants[(i * self.rank + j) * self.rank + k]
    }

    /// Nonzero structure constants as `(i, j, k, c)`, zero-based.
    pub fn nonzero_terms(&self) -> impl Iterator<Item = (usize, usize, usize, &BigInt)> + '_ {
        let d = self.rank;
        self.constants
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(move |(idx, c)| (idx / (d * d), (idx / d) % d, idx % d, c))
    }

    /// Product of two coordinate vectors under the ring multiplication.
    pub fn multiply(&self, a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); self.rank];
        for (i, j, k, c) in self.nonzero_terms() {
            if a[i].is_zero() || b[j].is_zero() {
                continue;
            }
            out[k] += &a[i] * &b[j] * c;
        }
        out
    }

    /// Check commutativity, associativity and the identity law.
    pub fn validate(&self) -> std::result::Result<(), Violation> {
        let d = self.rank;
        if self.constants.len() != d * d * d || self.identity.len() != d {
            return Err(Violation::Shape(
                "tensor or identity has the wrong length".into(),
            ));
        }
        for i in 0..d {
            for j in 0..d {
                for k in 0..d {
                    if self.constant(i, j, k) != self.constant(j, i, k) {
                        return Err(Violation::Commutativity {
                            i: i + 1,
                            j: j + 1,
                            k: k + 1,
                        });
                    }
                }
            }
        }
        for i in 0..d {
            for j in 0..d {
                for l in 0..d {
                    for m in 0..d {
                        let mut lhs = BigInt::zero();
                        let mut rhs = BigInt::zero();
                        for k in 0..d {
                            lhs += self.constant(i, j, k) * self.constant(k, l, m);
                            rhs += self.constant(j, l, k) * self.constant(i, k, m);
                        }
                        if lhs != rhs {
                            return Err(Violation::Associativity {
                                i: i + 1,
                                j: j + 1,
                                l: l + 1,
                                coord: m + 1,
                            });
                        }
                    }
                }
            }
        }
        for j in 0..d {
            let mut ej = vec![BigInt::zero(); d];
            ej[j] = BigInt::one();
            if self.multiply(&self.identity, &ej) != ej {
                return Err(Violation::Identity { j: j + 1 });
            }
        }
        Ok(())
    }

    fn validated(self) -> Result<Self> {
        match self.validate() {
            Ok(()) => Ok(self),
            Err(v) => Err(Error::InvalidRing(v.to_string())),
        }
    }

    /// Does every product `e_a e_b` only involve coordinates `<= min(a, b)`?
    /// The split ring has this shape; it is what the entrywise pruned
    /// enumeration relies on.
    pub fn is_lower_supported(&self) -> bool {
        self.nonzero_terms().all(|(i, j, k, _)| k <= i.min(j))
    }

    /// Stable digest of the tensor and identity (the label is not hashed).
    pub fn digest(&self) -> String {
        let mut v = self.to_spec_json();
        v.as_object_mut().expect("object").remove("label");
        let bytes = serde_json::to_vec(&v).expect("serializable");
        hex::encode(Sha256::digest(&bytes))[..16].to_string()
    }

    /// Ring-spec JSON: `{"rank", "identity", "constants": [[i,j,k,c],...], "label"}`
    /// with one-based indices and omitted triples equal to zero.
    pub fn to_spec_json(&self) -> Value {
        let constants: Vec<Value> = self
            .nonzero_terms()
            .map(|(i, j, k, c)| json!([i + 1, j + 1, k + 1, int_to_json(c)]))
            .collect();
        let identity: Vec<Value> = self.identity.iter().map(int_to_json).collect();
        json!({
            "rank": self.rank,
            "identity": identity,
            "constants": constants,
            "label": self.label,
        })
    }

    pub fn from_spec_json(text: &str) -> Result<Self> {
        let v: Value = serde_json::from_str(text)?;
        Self::from_spec_value(&v)
    }

    pub fn from_spec_value(v: &Value) -> Result<Self> {
        let obj = v
            .as_object()
            .ok_or_else(|| Error::Parse("ring spec must be a JSON object".into()))?;
        let rank = obj
            .get("rank")
            .and_then(Value::as_u64)
            .ok_or_else(|| Error::Parse("missing integer field \"rank\"".into()))?;
        if rank == 0 {
            return Err(Error::InvalidRank(0));
        }
        if rank > 64 {
            return Err(Error::Parse(format!("rank {rank} is unreasonably large")));
        }
        let d = rank as usize;
        let identity = obj
            .get("identity")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"identity\"".into()))?
            .iter()
            .map(json_to_int)
            .collect::<Result<Vec<_>>>()?;
        let mut constants = vec![BigInt::zero(); d * d * d];
        let triples = obj
            .get("constants")
            .and_then(Value::as_array)
            .ok_or_else(|| Error::Parse("missing array field \"constants\"".into()))?;
        for t in triples {
            let t = t
                .as_array()
                .filter(|t| t.len() == 4)
                .ok_or_else(|| Error::Parse("constant entries must be [i, j, k, c]".into()))?;
            let mut idx = [0usize; 3];
            for (slot, raw) in idx.iter_mut().zip(t) {
                let x = raw
                    .as_u64()
                    .filter(|&x| x >= 1 && x <= rank)
                    .ok_or_else(|| Error::Parse(format!("index {raw} outside 1..={rank}")))?;
                *slot = x as usize - 1;
            }
            constants[(idx[0] * d + idx[1]) * d + idx[2]] += json_to_int(&t[3])?;
        }
        let label = obj
            .get("label")
            .and_then(Value::as_str)
            .unwrap_or("")
            .to_string();
        StructureRing::from_dense(d, constants, identity, label)
    }
}

fn int_to_json(c: &BigInt) -> Value {
    match c.to_i64() {
        Some(v) => json!(v),
        None => json!(c.to_string()),
    }
}

fn json_to_int(v: &Value) -> Result<BigInt> {
    match v {
        Value::Number(n) => n
            .as_i64()
            .map(BigInt::from)
            .ok_or_else(|| Error::Parse(format!("non-integer constant {n}"))),
        Value::String(s) => s
            .parse::<BigInt>()
            .map_err(|_| Error::Parse(format!("bad integer string {s:?}"))),
        other => Err(Error::Parse(format!("expected integer, found {other}"))),
    }
}

/// `Z^d` with componentwise multiplication.
pub fn make_split_ring(d: usize) -> Result<StructureRing> {
    if d == 0 {
        return Err(Error::InvalidRank(0));
    }
    let mut constants = vec![BigInt::zero(); d * d * d];
    for i in 0..d {
        constants[(i * d + i) * d + i] = BigInt::one();
    }
    StructureRing::from_dense(d, constants, vec![BigInt::one(); d], format!("split:{d}"))
}

/// `Z[x]/(poly)` on the basis `1, x, ..., x^(d-1)`.
pub fn make_monogenic_ring(poly: &IntPoly) -> Result<StructureRing> {
    if !poly.is_monic() {
        return Err(Error::NotMonic(poly.to_string()));
    }
    let d = poly.degree();
    let powers: Vec<Vec<BigInt>> = (0..2 * d - 1).map(|n| poly.power_of_x_mod(n)).collect();
    let mut constants = vec![BigInt::zero(); d * d * d];
    for i in 0..d {
        for j in 0..d {
            for k in 0..d {
                constants[(i * d + j) * d + k] = powers[i + j][k].clone();
            }
        }
    }
    let mut identity = vec![BigInt::zero(); d];
    identity[0] = BigInt::one();
    StructureRing::from_dense(d, constants, identity, format!("monogenic:{poly}"))?.validated()
}

/// Direct product with `a`'s basis first.
pub fn product_ring(a: &StructureRing, b: &StructureRing) -> Result<StructureRing> {
    for r in [a, b] {
        if let Err(v) = r.validate() {
            return Err(Error::InvalidRing(format!("{}: {v}", r.label)));
        }
    }
    let (da, db) = (a.rank, b.rank);
    let d = da + db;
    let mut constants = vec![BigInt::zero(); d * d * d];
    for (i, j, k, c) in a.nonzero_terms() {
        constants[(i * d + j) * d + k] = c.clone();
    }
    for (i, j, k, c) in b.nonzero_terms() {
        constants[((i + da) * d + j + da) * d + k + da] = c.clone();
    }
    let identity = a.identity.iter().chain(&b.identity).cloned().collect();
    StructureRing::from_dense(d, constants, identity, format!("{}*{}", a.label, b.label))
}

/// Residue-degree multiset of an unramified prime, e.g. `1^2 2^1 3^1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SplittingType {
    /// Sorted in decreasing order.
    degrees: Vec<usize>,
}

impl SplittingType {
    pub fn new(mut degrees: Vec<usize>) -> Result<Self> {
        if degrees.is_empty() || degrees.contains(&0) {
            return Err(Error::Parse(
                "a splitting type is a non-empty list of positive degrees".into(),
            ));
        }
        degrees.sort_unstable_by(|a, b| b.cmp(a));
        Ok(SplittingType { degrees })
    }

    pub fn degrees(&self) -> &[usize] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.iter().sum()
    }

    /// Number of residue-degree-1 factors.
    pub fn v(&self) -> usize {
        self.degrees.iter().filter(|&&f| f == 1).count()
    }

    /// Number of residue-degree-2 factors.
    pub fn w(&self) -> usize {
        self.degrees.iter().filter(|&&f| f == 2).count()
    }

    /// Every partition of `n`, each in decreasing order; partitions are
    /// listed in reverse lexicographic order.
    pub fn all_of(n: usize) -> Vec<SplittingType> {
        fn rec(rem: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<SplittingType>) {
            if rem == 0 {
                out.push(SplittingType {
                    degrees: cur.clone(),
                });
                return;
            }
            for part in (1..=rem.min(max)).rev() {
                cur.push(part);
                rec(rem - part, part, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }
}

impl fmt::Display for SplittingType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut asc = self.degrees.clone();
        asc.sort_unstable();
        let mut parts = Vec::new();
        let mut i = 0;
        while i < asc.len() {
            let mut j = i;
            while j < asc.len() && asc[j] == asc[i] {
                j += 1;
            }
            parts.push(format!("{}^{}", asc[i], j - i));
            i = j;
        }
        f.write_str(&parts.join(" "))
    }
}

impl FromStr for SplittingType {
    type Err = Error;

    /// Accepts `1^3 2^1`, `1^3,2`, `2 2 1` or `221` (single-digit parts).
    fn from_str(s: &str) -> Result<Self> {
        let tokens: Vec<&str> = s
            .split(|c: char| c.is_whitespace() || c == ',')
            .filter(|t| !t.is_empty())
            .collect();
        let mut degrees = Vec::new();
        let bad = || Error::Parse(format!("bad splitting type {s:?}"));
        if tokens.len() == 1 && !tokens[0].contains('^') && tokens[0].len() > 1 {
            for ch in tokens[0].chars() {
                degrees.push(ch.to_digit(10).ok_or_else(bad)? as usize);
            }
            return SplittingType::new(degrees);
        }
        for t in tokens {
            let (base, exp) = match t.split_once('^') {
                Some((b, e)) => (b, e.parse::<usize>().map_err(|_| bad())?),
                None => (t, 1),
            };
            let base = base.parse::<usize>().map_err(|_| bad())?;
            if exp > 64 || base > 64 {
                return Err(bad());
            }
            degrees.extend(std::iter::repeat_n(base, exp));
        }
        SplittingType::new(degrees)
    }
}

/// Product of `Z[x]/(g_f)` over the degrees `f` of `ty`, each `g_f` the least
/// monic polynomial irreducible mod `p`. Blocks are laid out as: degrees at
/// least 3 in decreasing order, then the degree-1 block, then the degree-2
/// pairs, each block on the basis `1, y, ..., y^(f-1)`.
pub fn make_unramified_product(p: u64, ty: &SplittingType) -> Result<StructureRing> {
    require_prime(p)?;
    let mut order: Vec<usize> = ty.degrees().iter().copied().filter(|&f| f >= 3).collect();
    order.extend(std::iter::repeat_n(1, ty.v()));
    order.extend(std::iter::repeat_n(2, ty.w()));
    let mut acc: Option<StructureRing> = None;
    for f in order {
        let block = make_monogenic_ring(&find_irreducible(p, f)?)?;
        acc = Some(match acc {
            None => block,
            Some(a) => product_ring(&a, &block)?,
        });
    }
    let ring = acc.expect("splitting type is non-empty");
    Ok(ring.with_label(format!("unramified:p={p}:{ty}")))
}

/// `split:<d>`, `monogenic:<poly>` or `unramified:<p>:<type>`.
pub fn ring_from_kind(s: &str) -> Result<StructureRing> {
    let (kind, arg) = s
        .split_once(':')
        .ok_or_else(|| Error::Parse(format!("ring kind {s:?} is not kind:argument")))?;
    match kind.trim() {
        "split" => {
            let d: usize = arg
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad rank {arg:?}")))?;
            if d > 64 {
                return Err(Error::InvalidRank(d));
            }
            make_split_ring(d)
        }
        "monogenic" => {
            let f: IntPoly = arg.trim().parse()?;
            if f.degree() > 64 {
                return Err(Error::InvalidRank(f.degree()));
            }
            make_monogenic_ring(&f)
        }
        "unramified" => {
            let (p, ty) = arg
                .split_once(':')
                .ok_or_else(|| Error::Parse("expected unramified:<p>:<type>".into()))?;
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime {p:?}")))?;
            let ty: SplittingType = ty.parse()?;
            if ty.n() > 16 {
                return Err(Error::InvalidRank(ty.n()));
            }
            make_unramified_product(p, &ty)
        }
        other => Err(Error::Parse(format!("unknown ring kind {other:?}"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn split_rings() {
        assert!(matches!(make_split_ring(0), Err(Error::InvalidRank(0))));
        let r1 = make_split_ring(1).unwrap();
        assert_eq!(r1.nonzero_terms().count(), 1);
        let r2 = make_split_ring(2).unwrap();
        assert_eq!(r2.constant(0, 0, 0), &BigInt::one());
        assert_eq!(r2.constant(1, 1, 1), &BigInt::one());
        assert!(r2.constant(0, 1, 0).is_zero() && r2.constant(0, 1, 1).is_zero());
        assert_eq!(r2.identity(), &ints(&[1, 1])[..]);
        let r5 = make_split_ring(5).unwrap();
        assert_eq!(r5.validate(), Ok(()));
        assert_eq!(r5.identity(), &ints(&[1, 1, 1, 1, 1])[..]);
        assert!(make_split_ring(4).unwrap().validate().is_ok());
        assert!(r5.is_lower_supported());
    }

    #[test]
    fn monogenic_rings() {
        let z = make_monogenic_ring(&"x-1".parse().unwrap()).unwrap();
        assert_eq!(z.rank(), 1);
        assert_eq!(z.constant(0, 0, 0), &BigInt::one());
        let q = make_monogenic_ring(&"x^2-2".parse().unwrap()).unwrap();
        assert_eq!(q.constant(1, 1, 0), &BigInt::from(2));
        assert!(q.constant(1, 1, 1).is_zero());
        let e = make_monogenic_ring(&"x^2+x+1".parse().unwrap()).unwrap();
        assert_eq!(e.constant(1, 1, 0), &BigInt::from(-1));
        assert_eq!(e.constant(1, 1, 1), &BigInt::from(-1));
        assert!(matches!(
            make_monogenic_ring(&"2*x^2+1".parse().unwrap()),
            Err(Error::NotMonic(_))
        ));
        assert!(make_monogenic_ring(&"x^3-2".parse().unwrap())
            .unwrap()
            .validate()
            .is_ok());
    }

    #[test]
    fn commutativity_violation_is_reported() {
        let mut r = make_split_ring(2).unwrap();
        // c[1][2][1] = 1 but c[2][1][1] = 0 (one-based)
        r.constants[2] = BigInt::one();
        assert_eq!(
            r.validate(),
            Err(Violation::Commutativity { i: 1, j: 2, k: 1 })
        );
    }

    #[test]
    fn products_and_unramified_models() {
        let z = make_split_ring(1).unwrap();
        let zz = product_ring(&z, &z).unwrap();
        assert_eq!(zz.constants, make_split_ring(2).unwrap().constants);
        let s5 = product_ring(&make_split_ring(2).unwrap(), &make_split_ring(3).unwrap()).unwrap();
        assert_eq!(s5.constants, make_split_ring(5).unwrap().constants);
        assert_eq!(s5.identity, make_split_ring(5).unwrap().identity);

        let gauss = make_monogenic_ring(&"x^2+1".parse().unwrap()).unwrap();
        let r = product_ring(&gauss, &z).unwrap();
        assert_eq!(r.rank(), 3);
        assert_eq!(r.identity(), &ints(&[1, 0, 1])[..]);
        assert_eq!(r.constant(1, 1, 0), &BigInt::from(-1));
        assert_eq!(r.constant(2, 2, 2), &BigInt::one());
        assert!(r.validate().is_ok());

        let split3 = make_unramified_product(5, &"1^3".parse().unwrap()).unwrap();
        assert_eq!(split3.constants, make_split_ring(3).unwrap().constants);

        let q3 = make_unramified_product(3, &"2^1".parse().unwrap()).unwrap();
        // x^2 + 1 = x^2 - 2 mod 3, and 2 is not a square mod 3
        assert_eq!(q3.constant(1, 1, 0), &BigInt::from(-1));
        assert!((0..3).all(|a: i64| (a * a - 2).rem_euclid(3) != 0));

        let r = make_unramified_product(2, &"1^1 2^1".parse().unwrap()).unwrap();
        assert_eq!(r.rank(), 3);
        assert_eq!(r.identity(), &ints(&[1, 1, 0])[..]);
        assert_eq!(r.constant(2, 2, 1), &BigInt::from(-1));
        assert_eq!(r.constant(2, 2, 2), &BigInt::from(-1));

        // block layout: cubic first, then linear factors, then the quadratic
        let r = make_unramified_product(3, &"1^2 2^1 3^1".parse().unwrap()).unwrap();
        assert_eq!(r.identity(), &ints(&[1, 0, 0, 1, 1, 1, 0])[..]);
    }

    #[test]
    fn splitting_type_parsing() {
        let t: SplittingType = "1^3 2^1".parse().unwrap();
        assert_eq!(t.degrees(), &[2, 1, 1, 1]);
        assert_eq!((t.v(), t.w(), t.n()), (3, 1, 5));
        assert_eq!(t.to_string(), "1^3 2^1");
        assert_eq!(
            "221".parse::<SplittingType>().unwrap().degrees(),
            &[2, 2, 1]
        );
        assert_eq!("5".parse::<SplittingType>().unwrap().degrees(), &[5]);
        assert!("0".parse::<SplittingType>().is_err());
        assert!("".parse::<SplittingType>().is_err());
        assert_eq!(SplittingType::all_of(5).len(), 7);
        assert_eq!(SplittingType::all_of(6).len(), 11);
    }

    #[test]
    fn spec_json_round_trip() {
        let r = make_unramified_product(3, &"1^1 2^1".parse().unwrap()).unwrap();
        let text = r.to_spec_json().to_string();
        let back = StructureRing::from_spec_json(&text).unwrap();
        assert_eq!(back, r);
        assert_eq!(back.digest(), r.digest());
        assert_ne!(r.digest(), make_split_ring(3).unwrap().digest());
        let bad = r#"{"rank": 2, "identity": [1,1], "constants": [[0,1,1,1]]}"#;
        assert!(StructureRing::from_spec_json(bad).is_err());
    }
}
