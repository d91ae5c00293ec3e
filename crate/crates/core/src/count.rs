//! Enumeration of multiplicatively closed sublattices of `p`-power index.
//!
//! Every lattice of index `p^m` contains `p^m Z^d`, so all arithmetic on the
//! search path is done modulo `M = p^m` in machine words.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Arc;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::hnf::{closure_check, unital_check, HnfRep};
use crate::modular::{checked_pow, inv_mod, mul_mod, require_prime, sqrt_mod};
use crate::ring::StructureRing;
use crate::table::LocalCountTable;

/// How the search tree is pruned.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Entrywise pruning when the ring allows it, rowwise otherwise.
    #[default]
    Auto,
    /// Solve each new entry from the closure congruences at its column.
    /// Needs `e_a e_b` supported on coordinates `<= min(a, b)`.
    EntryPruned,
    /// Check each product as soon as all rows it can involve are assigned.
    RowPruned,
    /// Assign everything, then run the exact big-integer checks.
    Exhaustive,
}

/// Number of leaves plus interior nodes one search may visit.
#[derive(Clone, Debug)]
struct NodeBudget {
    limit: u64,
    used: Arc<AtomicU64>,
}

impl NodeBudget {
    const BATCH: u64 = 1 << 12;

    fn charge(&self, n: u64) -> Result<()> {
        let used = self.used.fetch_add(n, Ordering::Relaxed) + n;
        if used > self.limit {
            return Err(Error::BudgetExceeded {
                what: "subring enumeration".into(),
                needed: used as u128,
                budget: self.limit as u128,
            });
        }
        Ok(())
    }
}

/// The ring reduced mod `M` together with one diagonal.
struct Setup {
    d: usize,
    p: u64,
    modulus: u64,
    c: Vec<u64>,
    terms: Vec<(usize, usize, usize, u64)>,
    e: Vec<u64>,
    k: Vec<u32>,
    pk: Vec<u64>,
    unital: bool,
}

impl Setup {
    fn new(ring: &StructureRing, p: u64, diag: &[u32], unital: bool) -> Result<Self> {
        let d = ring.rank();
        if diag.len() != d {
            return Err(Error::DimensionMismatch {
                expected: d,
                found: diag.len(),
            });
        }
        let m: u32 = diag.iter().sum();
        let modulus = checked_pow(p, m).ok_or(Error::ModulusTooLarge { p, m })?;
        let mb = BigInt::from(modulus);
        let red = |x: &BigInt| x.mod_floor(&mb).to_u64().expect("residue fits u64");
        let mut c = vec![0u64; d * d * d];
        let mut terms = Vec::new();
        for (i, j, k, v) in ring.nonzero_terms() {
            let r = red(v);
            c[(i * d + j) * d + k] = r;
            if r != 0 {
                terms.push((i, j, k, r));
            }
        }
        let e = ring.identity().iter().map(red).collect();
        let pk = diag.iter().map(|&k| p.pow(k)).collect();
        Ok(Setup {
            d,
            p,
            modulus,
            c,
            terms,
            e,
            k: diag.to_vec(),
            pk,
            unital,
        })
    }

    #[inline]
    fn cc(&self, i: usize, j: usize, k: usize) -> u64 {
        self.c[(i * self.d + j) * self.d + k]
    }

    #[inline]
    fn mul(&self, a: u64, b: u64) -> u64 {
        mul_mod(a, b, self.modulus)
    }

    #[inline]
    fn add(&self, a: u64, b: u64) -> u64 {
        ((a as u128 + b as u128) % self.modulus as u128) as u64
    }

    #[inline]
    fn sub(&self, a: u64, b: u64) -> u64 {
        self.add(a, self.modulus - b % self.modulus)
    }

    /// Lower support plus symmetry, which the entrywise residual formulas use.
    fn lower_supported(&self) -> bool {
        self.terms
            .iter()
            .all(|&(i, j, k, v)| k <= i.min(j) && self.cc(j, i, k) == v)
    }

    /// The identity's last coordinate must be divisible by `p^k_d`.
    fn unital_possible(&self) -> bool {
        !self.unital || self.e[self.d - 1].is_multiple_of(self.pk[self.d - 1])
    }

    /// Product of two rows mod `M`.
    fn product(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let mut w = vec![0u64; self.d];
        for &(i, j, k, c) in &self.terms {
            if a[i] != 0 && b[j] != 0 {
                w[k] = self.add(w[k], self.mul(self.mul(a[i], b[j]), c));
            }
        }
        w
    }

    /// Back-substitution over rows `0..=top`; coordinates above `top` must be zero.
    fn contains(&self, rows: &[Vec<u64>], mut w: Vec<u64>, top: usize) -> bool {
        for k in (0..=top).rev() {
            if !w[k].is_multiple_of(self.pk[k]) {
                return false;
            }
            let q = w[k] / self.pk[k];
            if q == 0 {
                continue;
            }
            for t in 0..k {
                w[t] = self.sub(w[t], self.mul(q, rows[k][t]));
            }
        }
        true
    }
}

/// `f(x) = a x^2 + b x + c` with coefficients mod `M`.
#[derive(Clone, Copy, Debug)]
struct Quad {
    a: u64,
    b: u64,
    c: u64,
}

impl Quad {
    #[inline]
    fn eval(&self, s: &Setup, x: u64) -> u64 {
        let x = x % s.modulus;
        s.add(s.mul(s.add(s.mul(self.a, x), self.b), x), self.c)
    }

    fn is_zero_mod(&self, q: u64) -> bool {
        self.a.is_multiple_of(q) && self.b.is_multiple_of(q) && self.c.is_multiple_of(q)
    }
}

/// All `x` in `[0, p^k)` with `f(x) = 0 mod p^k` for every `f`, found by
/// solving mod `p` and lifting one `p`-adic digit at a time.
fn solve_system(s: &Setup, polys: &[Quad], k: u32, out: &mut Vec<u64>) {
    out.clear();
    if k == 0 {
        out.push(0);
        return;
    }
    let p = s.p;
    let active: Vec<Quad> = polys
        .iter()
        .copied()
        .filter(|f| !f.is_zero_mod(p))
        .collect();
    let ok_mod = |x: u64, q: u64| polys.iter().all(|f| f.eval(s, x) % q == 0);
    let mut level: Vec<u64> = Vec::new();
    if active.is_empty() {
        level.extend(0..p);
    } else if p < 64 {
        level.extend((0..p).filter(|&x| ok_mod(x, p)));
    } else {
        let pivot = active
            .iter()
            .min_by_key(|f| {
                if f.a % p != 0 {
                    2
                } else if f.b % p != 0 {
                    1
                } else {
                    0
                }
            })
            .expect("non-empty");
        for x in roots_mod_p(pivot, p) {
            if ok_mod(x, p) {
                level.push(x);
            }
        }
    }
    let mut pt = p;
    for _ in 1..k {
        let pt1 = pt * p;
        let mut next = Vec::new();
        for &r in &level {
            // f(r + p^t s) = f(r) + p^t s f'(r) mod p^{t+1} once t >= 1
            let mut forced: Option<u64> = None;
            let mut dead = false;
            for f in polys {
                let val = (f.eval(s, r) % pt1) / pt;
                let deriv = s.add(s.mul(s.mul(2, f.a), r), f.b) % p;
                if deriv == 0 {
                    if !val.is_multiple_of(p) {
                        dead = true;
                        break;
                    }
                } else {
                    let inv = inv_mod(deriv, p).expect("p prime");
                    let sd = mul_mod((p - val % p) % p, inv, p);
                    match forced {
                        Some(prev) if prev != sd => {
                            dead = true;
                            break;
                        }
                        _ => forced = Some(sd),
                    }
                }
            }
            if dead {
                continue;
            }
            match forced {
                Some(sd) => next.push(r + pt * sd),
                None => next.extend((0..p).map(|sd| r + pt * sd)),
            }
        }
        level = next;
        pt = pt1;
        if level.is_empty() {
            break;
        }
    }
    out.extend(level);
}

/// Roots mod an odd prime `p` of a polynomial that is nonzero mod `p`.
fn roots_mod_p(f: &Quad, p: u64) -> Vec<u64> {
    let (a, b, c) = (f.a % p, f.b % p, f.c % p);
    if a == 0 {
        if b == 0 {
            return if c == 0 { (0..p).collect() } else { Vec::new() };
        }
        let inv = inv_mod(b, p).expect("p prime");
        return vec![mul_mod((p - c) % p, inv, p)];
    }
    // x = (-b +- sqrt(b^2 - 4ac)) / 2a
    let disc = (mul_mod(b, b, p) + p - mul_mod(4 % p, mul_mod(a, c, p), p)) % p;
    let Some(root) = sqrt_mod(disc, p) else {
        return Vec::new();
    };
    let inv2a = inv_mod(mul_mod(2, a, p), p).expect("p odd");
    let mut out = vec![
        mul_mod((p - b + root) % p, inv2a, p),
        mul_mod((2 * p - b - root) % p, inv2a, p),
    ];
    out.sort_unstable();
    out.dedup();
    out
}

/// What to do at each leaf.
enum Sink {
    Count,
    Collect { limit: usize, reps: Vec<HnfRep> },
}

struct Search<'a> {
    s: &'a Setup,
    /// `v[i][j]` for `j <= i`, with `v[i][i] = p^k_i`.
    v: Vec<Vec<u64>>,
    leaves: u64,
    nodes: u64,
    budget: Option<&'a NodeBudget>,
    sink: Sink,
}

impl<'a> Search<'a> {
    fn new(s: &'a Setup, budget: Option<&'a NodeBudget>, sink: Sink) -> Self {
        let v = (0..s.d)
            .map(|i| {
                let mut row = vec![0u64; i + 1];
                row[i] = s.pk[i] % s.modulus;
                row
            })
            .collect();
        Search {
            s,
            v,
            leaves: 0,
            nodes: 0,
            budget,
            sink,
        }
    }

    fn tick(&mut self) -> Result<()> {
        self.nodes += 1;
        if self.nodes.is_multiple_of(NodeBudget::BATCH) {
            if let Some(b) = self.budget {
                b.charge(NodeBudget::BATCH)?;
            }
        }
        Ok(())
    }

    fn finish(&self) -> Result<()> {
        match self.budget {
            Some(b) => b.charge(self.nodes % NodeBudget::BATCH),
            None => Ok(()),
        }
    }

    fn leaf(&mut self) -> Result<()> {
        self.leaves += 1;
        if let Sink::Collect { limit, reps } = &mut self.sink {
            if reps.len() >= *limit {
                return Err(Error::BudgetExceeded {
                    what: "representative dump".into(),
                    needed: reps.len() as u128 + 1,
                    budget: *limit as u128,
                });
            }
            let below = self.v.iter().map(|r| r[..r.len() - 1].to_vec()).collect();
            reps.push(HnfRep::from_parts_unchecked(
                self.s.p,
                self.s.k.clone(),
                below,
            ));
        }
        Ok(())
    }
}

/// Rows top-down; inside row `r` the columns go from `r-1` down to `0`. With
/// lower support the residual of every product `v_i v_r` at column `c` is a
/// polynomial of degree at most 2 in the new entry `x[r][c]`.
struct EntrySearch<'a> {
    base: Search<'a>,
    /// `coef[r][i][t]`: back-substitution coefficient of `v_t` for the product `v_i v_r`.
    coef: Vec<Vec<Vec<u64>>>,
    /// The same for the identity (last row only).
    coef_e: Vec<u64>,
    scratch: Vec<Vec<u64>>,
}

impl<'a> EntrySearch<'a> {
    fn new(base: Search<'a>) -> Self {
        let d = base.s.d;
        EntrySearch {
            base,
            coef: vec![vec![vec![0; d]; d]; d],
            coef_e: vec![0; d],
            scratch: vec![Vec::new(); d],
        }
    }

    fn row(&mut self, r: usize) -> Result<()> {
        let s = self.base.s;
        if r == s.d {
            return self.base.leaf();
        }
        self.coef[r][r][r] = s.mul(s.pk[r] % s.modulus, s.cc(r, r, r));
        if s.unital && r == s.d - 1 {
            self.coef_e[r] = s.e[r] / s.pk[r];
        }
        self.column(r, r)
    }

    /// Assign column `c - 1` of row `r`.
    fn column(&mut self, r: usize, c: usize) -> Result<()> {
        self.base.tick()?;
        if c == 0 {
            return self.row(r + 1);
        }
        let c = c - 1;
        let s = self.base.s;
        let with_e = s.unital && r == s.d - 1;
        let mut polys: Vec<Quad> = Vec::with_capacity(r - c + 2);
        for i in c..=r {
            polys.push(self.pair_poly(i, r, c));
        }
        if with_e {
            let mut cst = s.e[c];
            for t in c + 1..r {
                cst = s.sub(cst, s.mul(self.coef_e[t], self.base.v[t][c]));
            }
            polys.push(Quad {
                a: 0,
                b: s.sub(0, self.coef_e[r]),
                c: cst,
            });
        }
        let mut roots = std::mem::take(&mut self.scratch[c]);
        // the pair (c, r) is divisible by p^k_c for every x
        let constraining: Vec<Quad> = polys.iter().skip(1).copied().collect();
        solve_system(s, &constraining, s.k[c], &mut roots);
        let pkc = s.pk[c];
        let mut result = Ok(());
        for &x in &roots {
            self.base.v[r][c] = x;
            for (idx, f) in polys.iter().enumerate() {
                let q = f.eval(s, x) / pkc;
                if with_e && idx == polys.len() - 1 {
                    self.coef_e[c] = q;
                } else {
                    self.coef[r][c + idx][c] = q;
                }
            }
            result = self.column(r, c);
            if result.is_err() {
                break;
            }
        }
        self.scratch[c] = roots;
        result
    }

    /// Residual at column `c` of the product `v_i v_r` as a polynomial in `x[r][c]`.
    fn pair_poly(&self, i: usize, r: usize, c: usize) -> Quad {
        let s = self.base.s;
        let v = &self.base.v;
        let coef = &self.coef[r][i];
        if i < r {
            let mut b = 0;
            let mut cst = 0;
            for a in c..=i {
                let via = v[i][a];
                if via == 0 {
                    continue;
                }
                b = s.add(b, s.mul(via, s.cc(a, c, c)));
                let mut inner = 0;
                for bb in c + 1..=r {
                    inner = s.add(inner, s.mul(v[r][bb], s.cc(a, bb, c)));
                }
                cst = s.add(cst, s.mul(via, inner));
            }
            for t in c + 1..=i {
                cst = s.sub(cst, s.mul(coef[t], v[t][c]));
            }
            Quad { a: 0, b, c: cst }
        } else {
            let a = s.cc(c, c, c);
            let mut lin = 0;
            for bb in c + 1..=r {
                lin = s.add(lin, s.mul(v[r][bb], s.cc(c, bb, c)));
            }
            let b = s.sub(s.add(lin, lin), coef[r]);
            let mut cst = 0;
            for aa in c + 1..=r {
                if v[r][aa] == 0 {
                    continue;
                }
                for bb in c + 1..=r {
                    cst = s.add(cst, s.mul(s.mul(v[r][aa], v[r][bb]), s.cc(aa, bb, c)));
                }
            }
            for t in c + 1..r {
                cst = s.sub(cst, s.mul(coef[t], v[t][c]));
            }
            Quad { a, b, c: cst }
        }
    }
}

/// Rows top-down, each row fully assigned before the products it completes
/// are tested by back-substitution.
struct RowSearch<'a> {
    base: Search<'a>,
    /// Products `(i, j)` whose membership is decidable once row `r` is set.
    ready: Vec<Vec<(usize, usize)>>,
}

impl<'a> RowSearch<'a> {
    fn new(base: Search<'a>) -> Self {
        let s = base.s;
        let d = s.d;
        let mut top = vec![vec![0usize; d]; d];
        for &(a, b, k, _) in &s.terms {
            top[a][b] = top[a][b].max(k);
        }
        // prefix maxima: products of v_i and v_j live on coordinates <= reach
        let mut reach = vec![vec![0usize; d]; d];
        for i in 0..d {
            for j in 0..d {
                let mut r = top[i][j];
                if i > 0 {
                    r = r.max(reach[i - 1][j]);
                }
                if j > 0 {
                    r = r.max(reach[i][j - 1]);
                }
                reach[i][j] = r;
            }
        }
        let mut ready = vec![Vec::new(); d];
        for i in 0..d {
            for j in i..d {
                ready[j.max(reach[i][j])].push((i, j));
            }
        }
        RowSearch { base, ready }
    }

    fn row(&mut self, r: usize) -> Result<()> {
        if r == self.base.s.d {
            return self.base.leaf();
        }
        self.entry(r, 0)
    }

    fn entry(&mut self, r: usize, c: usize) -> Result<()> {
        self.base.tick()?;
        let s = self.base.s;
        if c == r {
            if !self.row_closed(r) {
                return Ok(());
            }
            return self.row(r + 1);
        }
        for x in 0..s.pk[c] {
            self.base.v[r][c] = x;
            self.entry(r, c + 1)?;
        }
        Ok(())
    }

    fn row_closed(&self, r: usize) -> bool {
        let s = self.base.s;
        let d = s.d;
        let full: Vec<Vec<u64>> = self
            .base
            .v
            .iter()
            .map(|row| {
                let mut f = row.clone();
                f.resize(d, 0);
                f
            })
            .collect();
        for &(i, j) in &self.ready[r] {
            if !s.contains(&full, s.product(&full[i], &full[j]), r) {
                return false;
            }
        }
        if s.unital && r == d - 1 && !s.contains(&full, s.e.clone(), r) {
            return false;
        }
        true
    }
}

/// Every entry assigned, then [`closure_check`] and [`unital_check`].
fn exhaustive(
    ring: &StructureRing,
    s: &Setup,
    budget: Option<&NodeBudget>,
    mut sink: Sink,
) -> Result<(u64, Sink)> {
    let d = s.d;
    let slots: Vec<(usize, usize)> = (0..d).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
    let mut below: Vec<Vec<u64>> = (0..d).map(|i| vec![0; i]).collect();
    let mut count = 0u64;
    let mut nodes = 0u64;
    loop {
        nodes += 1;
        if nodes.is_multiple_of(NodeBudget::BATCH) {
            if let Some(b) = budget {
                b.charge(NodeBudget::BATCH)?;
            }
        }
        let rep = HnfRep::from_parts_unchecked(s.p, s.k.clone(), below.clone());
        if closure_check(ring, &rep)? && (!s.unital || unital_check(ring, &rep)?) {
            count += 1;
            if let Sink::Collect { limit, reps } = &mut sink {
                if reps.len() >= *limit {
                    return Err(Error::BudgetExceeded {
                        what: "representative dump".into(),
                        needed: reps.len() as u128 + 1,
                        budget: *limit as u128,
                    });
                }
                reps.push(rep);
            }
        }
        // odometer over all below-diagonal slots
        let mut advanced = false;
        for &(i, j) in slots.iter().rev() {
            below[i][j] += 1;
            if below[i][j] < s.pk[j] {
                advanced = true;
                break;
            }
            below[i][j] = 0;
        }
        if !advanced {
            if let Some(b) = budget {
                b.charge(nodes % NodeBudget::BATCH)?;
            }
            return Ok((count, sink));
        }
    }
}

fn run(
    ring: &StructureRing,
    p: u64,
    diag: &[u32],
    unital: bool,
    strategy: Strategy,
    budget: Option<&NodeBudget>,
    sink: Sink,
) -> Result<(u64, Sink)> {
    require_prime(p)?;
    let s = Setup::new(ring, p, diag, unital)?;
    if !s.unital_possible() {
        return Ok((0, sink));
    }
    let strategy = match strategy {
        Strategy::Auto if s.lower_supported() => Strategy::EntryPruned,
        Strategy::Auto => Strategy::RowPruned,
        Strategy::EntryPruned if !s.lower_supported() => {
            return Err(Error::InvalidRing(format!(
                "entrywise pruning needs e_a e_b supported on coordinates <= min(a, b); {} is not",
                ring.label()
            )))
        }
        other => other,
    };
    match strategy {
        Strategy::EntryPruned => {
            let mut es = EntrySearch::new(Search::new(&s, budget, sink));
            es.row(0)?;
            es.base.finish()?;
            Ok((es.base.leaves, es.base.sink))
        }
        Strategy::RowPruned => {
            let mut rs = RowSearch::new(Search::new(&s, budget, sink));
            rs.row(0)?;
            rs.base.finish()?;
            Ok((rs.base.leaves, rs.base.sink))
        }
        Strategy::Exhaustive => exhaustive(ring, &s, budget, sink),
        Strategy::Auto => unreachable!(),
    }
}

/// All compositions of `m` into `d` non-negative parts, in colexicographic order.
pub fn compositions(m: u32, d: usize) -> Vec<Vec<u32>> {
    fn rec(rem: u32, slots: usize, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if slots == 1 {
            cur.push(rem);
            out.push(cur.clone());
            cur.pop();
            return;
        }
        for k in 0..=rem {
            cur.push(k);
            rec(rem - k, slots - 1, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    if d > 0 {
        rec(m, d, &mut Vec::new(), &mut out);
    }
    out.sort_by(|a, b| a.iter().rev().cmp(b.iter().rev()));
    out
}

/// Representative count and exponent `sum_j (d-j) k_j`; the volume is `count * p^-exponent`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuVolume {
    pub count: BigUint,
    pub exponent: u64,
}

impl MuVolume {
    pub fn value(&self, p: u64) -> f64 {
        self.count.to_f64().unwrap_or(f64::INFINITY) * (p as f64).powf(-(self.exponent as f64))
    }

    /// `log_p` of the volume (`-inf` when empty).
    pub fn log_p(&self, p: u64) -> f64 {
        if self.count.is_zero() {
            return f64::NEG_INFINITY;
        }
        self.count.to_f64().unwrap_or(f64::INFINITY).ln() / (p as f64).ln() - self.exponent as f64
    }
}

/// Configurable front end for the enumeration, optionally memoized.
#[derive(Clone, Debug, Default)]
pub struct Counter {
    strategy: Strategy,
    budget: Option<u64>,
    table: Option<Arc<LocalCountTable>>,
}

impl Counter {
    pub fn new() -> Self {
        Counter::default()
    }

    pub fn with_strategy(mut self, strategy: Strategy) -> Self {
        self.strategy = strategy;
        self
    }

    /// Cap on search nodes per `count_index` call.
    pub fn with_budget(mut self, nodes: u64) -> Self {
        self.budget = Some(nodes);
        self
    }

    pub fn with_table(mut self, table: Arc<LocalCountTable>) -> Self {
        self.table = Some(table);
        self
    }

    pub fn table(&self) -> Option<&Arc<LocalCountTable>> {
        self.table.as_ref()
    }

    fn new_budget(&self) -> Option<NodeBudget> {
        self.budget.map(|limit| NodeBudget {
            limit,
            used: Arc::new(AtomicU64::new(0)),
        })
    }

    pub fn count_for_diagonal(
        &self,
        ring: &StructureRing,
        p: u64,
        diag: &[u32],
        unital: bool,
    ) -> Result<BigUint> {
        let budget = self.new_budget();
        let (n, _) = run(
            ring,
            p,
            diag,
            unital,
            self.strategy,
            budget.as_ref(),
            Sink::Count,
        )?;
        Ok(BigUint::from(n))
    }

    /// `a(p^m)`: closed (and, if asked, unital) sublattices of index `p^m`.
    pub fn count_index(
        &self,
        ring: &StructureRing,
        p: u64,
        m: u32,
        unital: bool,
    ) -> Result<BigUint> {
        require_prime(p)?;
        if m == 0 {
            return Ok(BigUint::from(1u8));
        }
        checked_pow(p, m).ok_or(Error::ModulusTooLarge { p, m })?;
        let digest = ring.digest();
        if let Some(t) = &self.table {
            if let Some(v) = t.get(&digest, p, m, unital) {
                return Ok(v);
            }
        }
        let v = self.compute_index(ring, p, m, unital)?;
        if let Some(t) = &self.table {
            t.insert(&digest, p, m, unital, v.clone())?;
        }
        Ok(v)
    }

    /// Always enumerates, ignoring any table.
    pub fn compute_index(
        &self,
        ring: &StructureRing,
        p: u64,
        m: u32,
        unital: bool,
    ) -> Result<BigUint> {
        require_prime(p)?;
        if m == 0 {
            return Ok(BigUint::from(1u8));
        }
        let budget = self.new_budget();
        let diags = compositions(m, ring.rank());
        let parts: Vec<u64> = diags
            .par_iter()
            .map(|diag| {
                run(
                    ring,
                    p,
                    diag,
                    unital,
                    self.strategy,
                    budget.as_ref(),
                    Sink::Count,
                )
                .map(|(n, _)| n)
            })
            .collect::<Result<_>>()?;
        Ok(parts.into_iter().map(BigUint::from).sum())
    }

    /// `[a(p^0), ..., a(p^m_max)]`.
    pub fn local_factor_coeffs(
        &self,
        ring: &StructureRing,
        p: u64,
        m_max: u32,
        unital: bool,
    ) -> Result<Vec<BigUint>> {
        (0..=m_max)
            .map(|m| self.count_index(ring, p, m, unital))
            .collect()
    }

    pub fn mu_volume(&self, ring: &StructureRing, p: u64, diag: &[u32]) -> Result<MuVolume> {
        let count = self.count_for_diagonal(ring, p, diag, false)?;
        let d = diag.len() as u64;
        let exponent = diag
            .iter()
            .enumerate()
            .map(|(j, &k)| (d - 1 - j as u64) * k as u64)
            .sum();
        Ok(MuVolume { count, exponent })
    }

    /// Every representative with this diagonal; fails once more than `limit` exist.
    pub fn representatives(
        &self,
        ring: &StructureRing,
        p: u64,
        diag: &[u32],
        unital: bool,
        limit: usize,
    ) -> Result<Vec<HnfRep>> {
        let budget = self.new_budget();
        let sink = Sink::Collect {
            limit,
            reps: Vec::new(),
        };
        match run(ring, p, diag, unital, self.strategy, budget.as_ref(), sink)? {
            (_, Sink::Collect { reps, .. }) => Ok(reps),
            _ => unreachable!(),
        }
    }
}

pub fn count_for_diagonal(
    ring: &StructureRing,
    p: u64,
    diag: &[u32],
    unital: bool,
) -> Result<BigUint> {
    Counter::new().count_for_diagonal(ring, p, diag, unital)
}

pub fn count_index(ring: &StructureRing, p: u64, m: u32, unital: bool) -> Result<BigUint> {
    Counter::new().count_index(ring, p, m, unital)
}

pub fn local_factor_coeffs(
    ring: &StructureRing,
    p: u64,
    m_max: u32,
    unital: bool,
) -> Result<Vec<BigUint>> {
    Counter::new().local_factor_coeffs(ring, p, m_max, unital)
}

pub fn mu_volume(ring: &StructureRing, p: u64, diag: &[u32]) -> Result<MuVolume> {
    Counter::new().mu_volume(ring, p, diag)
}
