//! The oracle battery. Each check recomputes one identity exhaustively for
//! given parameters and returns a [`CheckReport`]; failures carry a JSON
//! witness that can be fed back to the relevant module.
//!
//! Polynomials are compared structurally, never by evaluation at sample
//! points.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::time::Instant;

use num_integer::binomial;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::chains::{
    chain_to_factorization, count_chains, count_final_chains, enumerate_chains,
    enumerate_final_chains, factorization_to_chain, final_weighted_sum, weighted_sum,
    Factorization, FactorizationType,
};
use crate::error::Result;
use crate::ncpart::{GroundSet, NCPartition, Shape};
use crate::perm::Permutation;
use crate::poly::{
    final_chain_rhs, hook_rhs, maximal_chain_rhs, theorem1_rhs, Monomial, Polynomial,
};
use crate::psi::{matching_cases, psi, psi_inverse};
use crate::trees::{
    andre_weighted_sum, cayley_weighted_sum, check_hook_recursion, enumerate_andre,
    enumerate_cayley,
};

/// Names accepted by [`run_check`], in battery order.
pub const CHECK_NAMES: &[&str] = &[
    "theorem1",
    "counting",
    "prop1",
    "psi_bijection",
    "fiber_weights",
    "hook",
    "andre_counts",
    "recursion",
    "final_chains",
    "lemma_des",
    "cayley",
    "geodesic_lemmas",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Params {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<FactorizationType>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<usize>,
}

impl Params {
    fn n(n: usize) -> Self {
        Params {
            n: Some(n),
            ..Params::default()
        }
    }

    fn a(a: &FactorizationType) -> Self {
        Params {
            n: Some(a.n()),
            a: Some(a.clone()),
            k: None,
        }
    }
}

/// Outcome of one check. A failing report always has a witness.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub params: Params,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub counts: BTreeMap<String, u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub elapsed_ms: Option<u64>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// Accumulates counts and keeps the first failure.
#[derive(Default)]
struct Tally {
    counts: BTreeMap<String, u64>,
    witness: Option<Value>,
}

impl Tally {
    fn set(&mut self, key: &str, v: u64) {
        self.counts.insert(key.to_string(), v);
    }

    fn bump(&mut self, key: &str) {
        *self.counts.entry(key.to_string()).or_insert(0) += 1;
    }

    fn fail(&mut self, w: Value) {
        if self.witness.is_none() {
            self.witness = Some(w);
        }
    }

    fn ensure(&mut self, ok: bool, w: impl FnOnce() -> Value) {
        if !ok {
            self.fail(w());
        }
    }

    fn failed(&self) -> bool {
        self.witness.is_some()
    }

    fn finish(self, check: &str, params: Params) -> CheckReport {
        CheckReport {
            check: check.to_string(),
            params,
            status: if self.witness.is_some() {
                Status::Fail
            } else {
                Status::Pass
            },
            witness: self.witness,
            counts: self.counts,
            elapsed_ms: None,
        }
    }
}

fn sides(lhs: &Polynomial, rhs: &Polynomial) -> Value {
    json!({ "lhs": lhs, "rhs": rhs })
}

fn pow(n: usize, e: usize) -> u64 {
    (n as u64).pow(e as u32)
}

fn factorial(n: usize) -> u64 {
    (1..=n as u64).product()
}

fn catalan(n: usize) -> u64 {
    binomial(2 * n as u64, n as u64) / (n as u64 + 1)
}

fn ground(n: usize) -> GroundSet {
    GroundSet::standard(n).expect("n checked by caller")
}

/// `Σ_{N(a)} wt` against `∏ (b_i X_i + n − b_i)`.
pub fn check_theorem1(a: &FactorizationType) -> CheckReport {
    let mut t = Tally::default();
    let lhs = weighted_sum(a);
    let rhs = theorem1_rhs(a);
    t.set("chains", count_chains(a));
    t.ensure(lhs == rhs, || sides(&lhs, &rhs));
    t.finish("theorem1", Params::a(a))
}

/// `|N(a)| = n^{r-1}` at `X_i = 1`, and `X_i = 0` counts the chains made
/// of interval partitions only, which is `(n−1)!` for `a = (2,…,2)`.
pub fn check_counting(a: &FactorizationType) -> CheckReport {
    let mut t = Tally::default();
    let (n, r) = (a.n(), a.r());
    let wsum = weighted_sum(a);
    let mut listed = 0u64;
    let mut interval_only = 0u64;
    for chain in enumerate_chains(a) {
        listed += 1;
        if chain.partitions().iter().all(NCPartition::is_interval) {
            interval_only += 1;
        }
    }
    let expected = pow(n, r - 1);
    t.set("chains", listed);
    t.set("interval_chains", interval_only);
    let at_one = wsum.evaluate_all(1);
    let at_zero = wsum.evaluate_all(0);
    t.ensure(
        listed == expected && count_chains(a) == expected && at_one == expected.into(),
        || json!({ "expected": expected, "listed": listed, "at_one": at_one.to_string() }),
    );
    t.ensure(
        at_zero == interval_only.into(),
        || json!({ "at_zero": at_zero.to_string(), "interval_chains": interval_only }),
    );
    if a.parts().iter().all(|&p| p == 2) {
        t.ensure(
            interval_only == factorial(n - 1),
            || json!({ "interval_chains": interval_only, "expected": factorial(n - 1) }),
        );
    }
    t.finish("counting", Params::a(a))
}

/// Cycles of length `m` in `S_n`.
fn cycles_of_length(n: usize, m: usize) -> Vec<Permutation> {
    Permutation::all(n)
        .filter(|p| p.cycle_of().is_some_and(|c| c.len() == m))
        .collect()
}

/// Every tuple of cycles of type `a` multiplying to the long cycle; the
/// last factor is forced by the others.
fn brute_factorizations(a: &FactorizationType) -> Result<HashSet<Vec<Permutation>>> {
    let n = a.n();
    let c = Permutation::long_cycle(n)?;
    let parts = a.parts();
    let pools: Vec<Vec<Permutation>> = parts[..parts.len() - 1]
        .iter()
        .map(|&m| cycles_of_length(n, m))
        .collect();
    let last = parts[parts.len() - 1];
    let mut out = HashSet::new();
    let mut stack = vec![(Vec::new(), Permutation::identity(n))];
    while let Some((prefix, product)) = stack.pop() {
        if prefix.len() == pools.len() {
            let z = product.inverse().compose(&c)?;
            if z.cycle_of().is_some_and(|cy| cy.len() == last) {
                let mut tuple = prefix;
                tuple.push(z);
                out.insert(tuple);
            }
            continue;
        }
        for z in &pools[prefix.len()] {
            let mut next = prefix.clone();
            next.push(z.clone());
            stack.push((next, product.compose(z)?));
        }
    }
    Ok(out)
}

/// Largest `n` for which [`check_prop1`] also compares against every tuple
/// of cycles.
pub const PROP1_BRUTE_MAX_N: usize = 6;

/// Chains and factorizations correspond one to one, in both directions;
/// for small `n` the image is compared with a brute-force list.
pub fn check_prop1(a: &FactorizationType) -> CheckReport {
    let mut t = Tally::default();
    let mut images = HashSet::new();
    for chain in enumerate_chains(a) {
        let f = chain_to_factorization(&chain);
        let valid =
            Factorization::new(f.factors().to_vec()).is_ok() && &f.factorization_type() == a;
        let back = factorization_to_chain(&f);
        t.ensure(
            valid && back.as_ref() == Ok(&chain),
            || json!({ "chain": chain, "factors": f.factors() }),
        );
        t.ensure(
            images.insert(f.factors().to_vec()),
            || json!({ "duplicate_image_of": chain }),
        );
        if t.failed() {
            break;
        }
    }
    t.set("chains", images.len() as u64);
    if a.n() <= PROP1_BRUTE_MAX_N && !t.failed() {
        match brute_factorizations(a) {
            Ok(brute) => {
                t.set("brute_force", brute.len() as u64);
                if let Some(missing) = brute.iter().find(|f| !images.contains(*f)) {
                    t.fail(json!({ "missing_factorization": missing }));
                }
                t.ensure(
                    brute.len() == images.len(),
                    || json!({ "brute_force": brute.len(), "chains": images.len() }),
                );
            }
            Err(e) => t.fail(json!({ "error": e.to_string() })),
        }
    }
    t.finish("prop1", Params::a(a))
}

fn needs_two_parts(a: &FactorizationType, t: &mut Tally) -> Option<FactorizationType> {
    match a.truncate_last_two() {
        Ok(p) => Some(p),
        Err(e) => {
            t.fail(json!({ "error": e.to_string() }));
            None
        }
    }
}

/// `(Ψ, β)` maps `N(a)` bijectively onto `N(a') × {1..n}`: exactly one
/// case fires per chain, no two chains collide, and both compositions with
/// the inverse are identities.
pub fn check_psi_bijection(a: &FactorizationType) -> CheckReport {
    let mut t = Tally::default();
    let Some(a_prime) = needs_two_parts(a, &mut t) else {
        return t.finish("psi_bijection", Params::a(a));
    };
    let n = a.n();
    let r = a.r();
    let mut seen = HashSet::new();
    for chain in enumerate_chains(a) {
        let ps = chain.partitions();
        match matching_cases(&ps[r - 1], &ps[r - 2]) {
            Ok(cases) if cases.len() == 1 => {}
            Ok(cases) => {
                t.fail(json!({ "chain": chain, "matching_cases": cases }));
                break;
            }
            Err(e) => {
                t.fail(json!({ "chain": chain, "error": e.to_string() }));
                break;
            }
        }
        let out = match psi(&chain) {
            Ok(out) => out,
            Err(e) => {
                t.fail(json!({ "chain": chain, "error": e.to_string() }));
                break;
            }
        };
        t.bump(&format!("case_{}", out.case));
        let in_range = out.gamma.factorization_type() == &a_prime && (1..=n).contains(&out.bar);
        t.ensure(
            in_range,
            || json!({ "chain": chain, "gamma": out.gamma, "bar": out.bar }),
        );
        t.ensure(
            seen.insert((out.gamma.clone(), out.bar)),
            || json!({ "collision": chain, "gamma": out.gamma, "bar": out.bar }),
        );
        let back = psi_inverse(&out.gamma, out.bar, a);
        t.ensure(back.as_ref() == Ok(&chain), || {
            json!({ "chain": chain, "gamma": out.gamma, "bar": out.bar, "inverse": back.as_ref().ok() })
        });
        if t.failed() {
            break;
        }
    }
    t.set("chains", seen.len() as u64);
    let mut targets = 0u64;
    for gamma in enumerate_chains(&a_prime) {
        if t.failed() {
            break;
        }
        for bar in 1..=n {
            targets += 1;
            let ok = psi_inverse(&gamma, bar, a)
                .and_then(|c| psi(&c))
                .is_ok_and(|out| out.gamma == gamma && out.bar == bar);
            t.ensure(ok, || json!({ "gamma": gamma, "bar": bar }));
        }
    }
    t.set("targets", targets);
    t.ensure(
        t.failed() || seen.len() as u64 == targets,
        || json!({ "chains": seen.len(), "targets": targets }),
    );
    t.finish("psi_bijection", Params::a(a))
}

/// Every fiber of `Ψ` has weight `wt(Γ) ((n − a_r) X_{r-1} + a_r)`; each
/// chain agrees with its image away from `X_{r-1}`; exactly `a_r` bars
/// leave `π_{r-1}` an interval partition; summing gives the one-step
/// recursion for `Σ_{N(a)} wt`.
pub fn check_fiber_weights(a: &FactorizationType) -> CheckReport {
    let mut t = Tally::default();
    let Some(a_prime) = needs_two_parts(a, &mut t) else {
        return t.finish("fiber_weights", Params::a(a));
    };
    let n = a.n();
    let r = a.r();
    let last = a.parts()[r - 1];
    let top_var = (r - 1) as u32;
    let mut fibers: HashMap<Vec<NCPartition>, (Polynomial, usize)> = HashMap::new();
    for chain in enumerate_chains(a) {
        let out = match psi(&chain) {
            Ok(out) => out,
            Err(e) => {
                t.fail(json!({ "chain": chain, "error": e.to_string() }));
                break;
            }
        };
        let w = chain.weight();
        let rest =
            Monomial::from_exponents(w.exponents().iter().copied().filter(|&(v, _)| v != top_var));
        let gw = out.gamma.weight();
        t.ensure(rest == gw, || {
            json!({ "chain": chain, "gamma": out.gamma, "chain_weight": w.to_string(), "gamma_weight": gw.to_string() })
        });
        let entry = fibers.entry(out.gamma.partitions().to_vec()).or_default();
        entry.0 += &Polynomial::monomial(w, 1);
        if chain.partitions()[r - 1].is_interval() {
            entry.1 += 1;
        }
    }
    let factor = Polynomial::linear(top_var, (n - last) as i64, last as i64);
    let mut count = 0u64;
    for gamma in enumerate_chains(&a_prime) {
        if t.failed() {
            break;
        }
        count += 1;
        let expected = &Polynomial::monomial(gamma.weight(), 1) * &factor;
        let (got, interval_bars) = fibers.remove(gamma.partitions()).unwrap_or_default();
        t.ensure(
            got == expected,
            || json!({ "gamma": gamma, "lhs": got, "rhs": expected }),
        );
        t.ensure(
            interval_bars == last,
            || json!({ "gamma": gamma, "interval_bars": interval_bars, "expected": last }),
        );
    }
    t.ensure(
        fibers.is_empty(),
        || json!({ "stray_fibers": fibers.len() }),
    );
    t.set("fibers", count);
    let lhs = weighted_sum(a);
    let rhs = &weighted_sum(&a_prime) * &factor;
    t.ensure(lhs == rhs, || sides(&lhs, &rhs));
    t.finish("fiber_weights", Params::a(a))
}

/// `Σ_{A_n} wt = ∏_{i=1}^{n-1} (i X_i + n + 1 − i)`.
pub fn check_hook(n: usize) -> CheckReport {
    let mut t = Tally::default();
    let lhs = andre_weighted_sum(n);
    let rhs = hook_rhs(n);
    t.set("trees", enumerate_andre(n).len() as u64);
    t.ensure(lhs == rhs, || sides(&lhs, &rhs));
    t.finish("hook", Params::n(n))
}

/// Alternating permutations `σ_1 < σ_2 > σ_3 < …` of `{1..n}`.
fn alternating_permutations(n: usize) -> u64 {
    Permutation::all(n)
        .filter(|p| {
            p.images()
                .windows(2)
                .enumerate()
                .all(|(i, w)| (w[0] < w[1]) == (i % 2 == 0))
        })
        .count() as u64
}

/// André trees on `n` vertices are as many as alternating permutations.
pub fn check_andre_counts(n: usize) -> CheckReport {
    let mut t = Tally::default();
    let trees = enumerate_andre(n).len() as u64;
    let alternating = alternating_permutations(n);
    t.set("trees", trees);
    t.set("alternating", alternating);
    t.ensure(
        trees == alternating,
        || json!({ "trees": trees, "alternating": alternating }),
    );
    t.finish("andre_counts", Params::n(n))
}

/// The two-subtree recursion for the hook polynomial.
pub fn check_recursion(n: usize) -> CheckReport {
    let mut t = Tally::default();
    t.set("splits", 1 << n.saturating_sub(1));
    t.ensure(
        check_hook_recursion(n),
        || json!({ "n": n, "p_n": hook_rhs(n) }),
    );
    t.finish("recursion", Params::n(n))
}

/// Interval partitions below `pi` obtained by splitting one block in two
/// intervals of that block, found by scanning `lower` (the partitions of
/// rank one less).
fn interval_covers<'a>(pi: &NCPartition, lower: &'a [NCPartition]) -> Vec<&'a NCPartition> {
    let upper_blocks = pi.blocks();
    lower
        .iter()
        .filter(|rho| {
            if rho.refines(pi) != Ok(true) {
                return false;
            }
            let rho_blocks = rho.blocks();
            let split: Vec<&Vec<usize>> = upper_blocks
                .iter()
                .filter(|b| !rho_blocks.contains(b))
                .collect();
            let [b] = split[..] else { return false };
            let parts: Vec<Vec<usize>> = rho_blocks
                .into_iter()
                .filter(|p| b.contains(&p[0]))
                .collect();
            GroundSet::new(b)
                .and_then(|g| NCPartition::new(g, &parts))
                .is_ok_and(|local| local.is_interval())
        })
        .collect()
}

fn by_rank(n: usize) -> Vec<Vec<NCPartition>> {
    let mut ranks = vec![Vec::new(); n];
    for p in NCPartition::all(ground(n)) {
        ranks[p.rank()].push(p);
    }
    ranks
}

/// Maximal chains from `0̂` to each partition made of interval splits only.
fn interval_descents(ranks: &[Vec<NCPartition>]) -> HashMap<NCPartition, u64> {
    let mut memo = HashMap::new();
    for p in &ranks[0] {
        memo.insert(p.clone(), 1);
    }
    for r in 1..ranks.len() {
        for p in &ranks[r] {
            let total = interval_covers(p, &ranks[r - 1])
                .into_iter()
                .map(|q| memo[q])
                .sum();
            memo.insert(p.clone(), total);
        }
    }
    memo
}

/// Largest `n` for which [`check_final_chains`] also counts completions
/// into maximal chains.
pub const COMPLETION_MAX_N: usize = 7;

/// Final chains of length `k`: their number is `n^{k-2} C(n,k)`, their
/// weights sum to the closed form (whose division by `n` must be exact),
/// each completes into exactly `(n−k)!` maximal chains with an interval
/// prefix, and those maximal chains sum to `(n−k)!` times the final sum.
pub fn check_final_chains(n: usize, k: usize) -> CheckReport {
    let mut t = Tally::default();
    let params = Params {
        n: Some(n),
        a: None,
        k: Some(k),
    };
    let (chains, fast, fast_count) = match (
        enumerate_final_chains(n, k),
        final_weighted_sum(n, k),
        count_final_chains(n, k),
    ) {
        (Ok(it), Ok(s), Ok(c)) => (it.collect::<Vec<_>>(), s, c),
        (Err(e), _, _) | (_, Err(e), _) | (_, _, Err(e)) => {
            t.fail(json!({ "error": e.to_string() }));
            return t.finish("final_chains", params);
        }
    };
    let expected = pow(n, k - 2) * binomial(n as u64, k as u64);
    t.set("chains", chains.len() as u64);
    t.ensure(
        chains.len() as u64 == expected && fast_count == expected,
        || json!({ "listed": chains.len(), "counted": fast_count, "expected": expected }),
    );
    let streamed: Polynomial = chains
        .iter()
        .map(|c| Polynomial::monomial(c.weight(), 1))
        .sum();
    match final_chain_rhs(n, k) {
        Ok(rhs) => t.ensure(streamed == rhs && fast == rhs, || sides(&streamed, &rhs)),
        Err(e) => t.fail(json!({ "error": e.to_string() })),
    }
    if n <= COMPLETION_MAX_N && !t.failed() {
        let ranks = by_rank(n);
        let descents = interval_descents(&ranks);
        let want = factorial(n - k);
        for c in &chains {
            let got = descents[&c.partitions()[0]];
            t.ensure(
                got == want,
                || json!({ "final_chain": c.partitions(), "completions": got, "expected": want }),
            );
        }
        let prefix_free = |m: &Monomial| m.exponents().iter().all(|&(v, _)| v as usize >= n - k);
        let maximal = FactorizationType::maximal(n).expect("n >= 2");
        let completed: Polynomial = enumerate_chains(&maximal)
            .map(|c| c.weight())
            .filter(prefix_free)
            .map(|m| Polynomial::monomial(m, 1))
            .sum();
        let scaled = streamed.scale(want);
        t.ensure(completed == scaled, || sides(&completed, &scaled));
        t.set("completions_each", want);
    }
    t.finish("final_chains", params)
}

/// Every `π ∈ NC_n` of rank `r` has exactly `r` interval covers below it.
pub fn check_lemma_des(n: usize) -> CheckReport {
    let mut t = Tally::default();
    let ranks = by_rank(n);
    let total: usize = ranks.iter().map(Vec::len).sum();
    t.set("partitions", total as u64);
    t.ensure(
        total as u64 == catalan(n),
        || json!({ "partitions": total, "catalan": catalan(n) }),
    );
    for r in 1..ranks.len() {
        for pi in &ranks[r] {
            let covers = interval_covers(pi, &ranks[r - 1]).len();
            t.ensure(
                covers == r,
                || json!({ "partition": pi, "rank": r, "interval_covers": covers }),
            );
        }
    }
    t.finish("lemma_des", Params::n(n))
}

/// The decreasing-edge polynomial of Cayley trees equals the maximal-chain
/// product and the maximal-chain weighted sum.
pub fn check_cayley(n: usize) -> CheckReport {
    let mut t = Tally::default();
    let (trees, lhs) = match (enumerate_cayley(n), cayley_weighted_sum(n)) {
        (Ok(it), Ok(s)) => (it.count() as u64, s),
        (Err(e), _) | (_, Err(e)) => {
            t.fail(json!({ "error": e.to_string() }));
            return t.finish("cayley", Params::n(n));
        }
    };
    t.set("trees", trees);
    t.ensure(
        trees == pow(n, n - 2),
        || json!({ "trees": trees, "expected": pow(n, n - 2) }),
    );
    let rhs = maximal_chain_rhs(n);
    t.ensure(lhs == rhs, || sides(&lhs, &rhs));
    let chains = weighted_sum(&FactorizationType::maximal(n).expect("n >= 2"));
    t.ensure(chains == lhs, || json!({ "cayley": lhs, "chains": chains }));
    t.finish("cayley", Params::n(n))
}

/// Largest `n` for the cubic triangle-inequality sweep.
pub const TRIANGLE_MAX_N: usize = 5;

/// Length and geodesic facts over all of `S_n`: length is BFS distance in
/// the transposition Cayley graph and gives a metric; geodesic permutations
/// are exactly the `σ_π` (Catalan many); refinement matches additivity of
/// length; cycles on geodesics are increasing; a cycle cofactor of the long
/// cycle is an interval or near-interval `σ_π`; a cycle cofactor of `σ_π`
/// splits one block into an interval or near-interval partition, and every
/// such split arises; interval partitions form a Boolean lattice.
pub fn check_geodesic_lemmas(n: usize) -> CheckReport {
    let mut t = Tally::default();
    let params = Params::n(n);
    if n < 2 {
        t.fail(json!({ "error": "geodesic checks need n >= 2" }));
        return t.finish("geodesic_lemmas", params);
    }
    let perms: Vec<Permutation> = Permutation::all(n).collect();
    let c = Permutation::long_cycle(n).expect("n >= 2");
    let mul = |x: &Permutation, y: &Permutation| x.compose(y).expect("same n");
    t.set("permutations", perms.len() as u64);

    // BFS distance from the identity
    let transpositions: Vec<Permutation> = (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| (i, j)))
        .map(|(i, j)| Permutation::transposition(n, i, j).expect("valid"))
        .collect();
    let mut dist: HashMap<Permutation, usize> = HashMap::from([(Permutation::identity(n), 0)]);
    let mut queue = VecDeque::from([Permutation::identity(n)]);
    while let Some(s) = queue.pop_front() {
        let d = dist[&s];
        for tr in &transpositions {
            let next = mul(&s, tr);
            if !dist.contains_key(&next) {
                dist.insert(next.clone(), d + 1);
                queue.push_back(next);
            }
        }
    }
    for s in &perms {
        t.ensure(
            dist.get(s) == Some(&s.length()),
            || json!({ "permutation": s, "length": s.length(), "bfs": dist.get(s) }),
        );
        t.ensure(
            s.length() == s.inverse().length(),
            || json!({ "asymmetric": s }),
        );
    }
    if n <= TRIANGLE_MAX_N {
        let inv: Vec<Permutation> = perms.iter().map(Permutation::inverse).collect();
        let d = |i: usize, j: usize| mul(&perms[i], &inv[j]).length();
        'outer: for i in 0..perms.len() {
            for j in 0..perms.len() {
                let dij = d(i, j);
                for k in 0..perms.len() {
                    if dij > d(i, k) + d(k, j) {
                        t.fail(json!({ "triangle": [&perms[i], &perms[k], &perms[j]] }));
                        break 'outer;
                    }
                }
            }
        }
    }

    // geodesic permutations and NC_n
    let all_nc = NCPartition::all(ground(n));
    let nc_set: HashSet<&NCPartition> = all_nc.iter().collect();
    let mut geodesic = 0u64;
    let mut hit = HashSet::new();
    for s in &perms {
        let on = s.length() + mul(&c, &s.inverse()).length() == n - 1;
        let back = NCPartition::from_geodesic_permutation(s);
        if on {
            geodesic += 1;
            match back {
                Some(p) if nc_set.contains(&p) && &p.to_permutation() == s => {
                    hit.insert(p);
                }
                other => t.fail(json!({ "geodesic": s, "partition": other })),
            }
        } else {
            t.ensure(back.is_none(), || json!({ "not_geodesic": s }));
        }
    }
    t.set("geodesic", geodesic);
    t.ensure(
        geodesic == catalan(n) && hit.len() == all_nc.len(),
        || json!({ "geodesic": geodesic, "catalan": catalan(n), "partitions_hit": hit.len() }),
    );

    // refinement against additivity of length
    let sigmas: Vec<Permutation> = all_nc.iter().map(NCPartition::to_permutation).collect();
    for (p, sp) in all_nc.iter().zip(&sigmas) {
        for (q, sq) in all_nc.iter().zip(&sigmas) {
            let below = p.refines(q) == Ok(true);
            let additive = sq.length() == sp.length() + mul(&sp.inverse(), sq).length();
            t.ensure(
                below == additive,
                || json!({ "p": p, "q": q, "refines": below }),
            );
        }
    }

    // cycles inside a geodesic factorization C = x z y
    let cycles: Vec<&Permutation> = perms.iter().filter(|p| p.cycle_of().is_some()).collect();
    let mut triples = 0u64;
    for x in &perms {
        for z in &cycles {
            let xz = mul(x, z);
            let y = mul(&xz.inverse(), &c);
            if x.length() + z.length() + y.length() != n - 1 {
                continue;
            }
            triples += 1;
            let support = z.cycle_of().expect("cycle");
            let mut sorted = support.clone();
            sorted.sort_unstable();
            let increasing =
                (0..sorted.len()).all(|k| z.apply(sorted[k]) == sorted[(k + 1) % sorted.len()]);
            t.ensure(increasing, || json!({ "x": x, "z": z, "y": y }));
        }
    }
    t.set("geodesic_triples", triples);

    // cycle cofactors of the long cycle
    for z in &cycles {
        let y = mul(&c, &z.inverse());
        if y.length() + z.length() != n - 1 {
            continue;
        }
        let shape = NCPartition::from_geodesic_permutation(&y).map(|p| p.shape());
        t.ensure(
            matches!(shape, Some(Shape::Interval | Shape::NearInterval)),
            || json!({ "y": y, "z": z }),
        );
    }

    // cycle cofactors of σ_π split one block
    let mut factor_splits = 0u64;
    let mut direct_splits = 0u64;
    for (pi, sp) in all_nc.iter().zip(&sigmas) {
        for z in &cycles {
            let y = mul(sp, &z.inverse());
            if y.length() + z.length() != sp.length() {
                continue;
            }
            factor_splits += 1;
            let ok = NCPartition::from_geodesic_permutation(&y).is_some_and(|lower| {
                let lower_blocks = lower.blocks();
                let changed: Vec<Vec<usize>> = pi
                    .blocks()
                    .into_iter()
                    .filter(|b| !lower_blocks.contains(b))
                    .collect();
                let [b] = &changed[..] else { return false };
                let parts: Vec<Vec<usize>> = lower_blocks
                    .into_iter()
                    .filter(|p| b.contains(&p[0]))
                    .collect();
                lower.refines(pi) == Ok(true)
                    && parts.len() == z.cycle_of().map_or(0, |cy| cy.len())
                    && GroundSet::new(b)
                        .and_then(|g| NCPartition::new(g, &parts))
                        .is_ok_and(|local| local.shape() != Shape::Other)
            });
            t.ensure(ok, || json!({ "partition": pi, "z": z, "y": y }));
        }
        for b in pi.blocks().into_iter().filter(|b| b.len() > 1) {
            let g = GroundSet::new(&b).expect("block of a partition");
            direct_splits += NCPartition::all(g)
                .into_iter()
                .filter(|q| q.num_blocks() > 1 && q.shape() != Shape::Other)
                .count() as u64;
        }
    }
    t.set("block_splits", factor_splits);
    t.ensure(
        factor_splits == direct_splits,
        || json!({ "cycle_cofactors": factor_splits, "shape_splits": direct_splits }),
    );

    // interval partitions and subsets of cut points
    let intervals: Vec<&NCPartition> = all_nc.iter().filter(|p| p.is_interval()).collect();
    let cuts = |p: &NCPartition| -> u64 {
        (1..n)
            .filter(|&i| p.block_containing(i) != p.block_containing(i + 1))
            .fold(0, |m, i| m | 1 << i)
    };
    let distinct: HashSet<u64> = intervals.iter().map(|p| cuts(p)).collect();
    t.ensure(
        intervals.len() == 1 << (n - 1) && distinct.len() == intervals.len(),
        || json!({ "interval_partitions": intervals.len() }),
    );
    for p in &intervals {
        for q in &intervals {
            let (cp, cq) = (cuts(p), cuts(q));
            t.ensure(
                (p.refines(q) == Ok(true)) == (cq & !cp == 0),
                || json!({ "p": p, "q": q }),
            );
        }
    }
    t.finish("geodesic_lemmas", params)
}

/// Bounds and switches for a battery run.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BatteryOptions {
    pub max_n: usize,
    pub timing: bool,
}

impl Default for BatteryOptions {
    fn default() -> Self {
        BatteryOptions {
            max_n: 7,
            timing: false,
        }
    }
}

type Job = Box<dyn Fn() -> CheckReport + Send + Sync>;

/// Upper bounds applied on top of `max_n` where a check is exponential in
/// a different way from chain enumeration.
const LEMMA_DES_MAX_N: usize = 8;
const GEODESIC_MAX_N: usize = 5;

fn jobs_for(name: &str, max_n: usize) -> Option<Vec<Job>> {
    let types =
        || -> Vec<FactorizationType> { (2..=max_n).flat_map(FactorizationType::all_for).collect() };
    let with_types = |f: fn(&FactorizationType) -> CheckReport, min_r: usize| -> Vec<Job> {
        types()
            .into_iter()
            .filter(|a| a.r() >= min_r)
            .map(|a| Box::new(move || f(&a)) as Job)
            .collect()
    };
    let with_n = |f: fn(usize) -> CheckReport, lo: usize, hi: usize| -> Vec<Job> {
        (lo..=hi).map(|n| Box::new(move || f(n)) as Job).collect()
    };
    let jobs = match name {
        "theorem1" => with_types(check_theorem1, 1),
        "counting" => with_types(check_counting, 1),
        "prop1" => with_types(check_prop1, 1),
        "psi_bijection" => with_types(check_psi_bijection, 2),
        "fiber_weights" => with_types(check_fiber_weights, 2),
        "hook" => with_n(check_hook, 1, max_n),
        "andre_counts" => with_n(check_andre_counts, 1, max_n),
        "recursion" => with_n(check_recursion, 2, max_n),
        "final_chains" => (2..=max_n)
            .flat_map(|n| (2..=n).map(move |k| Box::new(move || check_final_chains(n, k)) as Job))
            .collect(),
        "lemma_des" => with_n(check_lemma_des, 1, max_n.min(LEMMA_DES_MAX_N)),
        "cayley" => with_n(check_cayley, 2, max_n),
        "geodesic_lemmas" => with_n(check_geodesic_lemmas, 2, max_n.min(GEODESIC_MAX_N)),
        _ => return None,
    };
    Some(jobs)
}

fn run_jobs(jobs: Vec<Job>, timing: bool) -> Vec<CheckReport> {
    jobs.par_iter()
        .map(|job| {
            let start = Instant::now();
            let mut report = job();
            if timing {
                report.elapsed_ms = Some(start.elapsed().as_millis() as u64);
            }
            report
        })
        .collect()
}

/// Runs one named check for every parameter up to `opts.max_n`. Returns
/// `None` for an unknown name.
pub fn run_check(name: &str, opts: BatteryOptions) -> Option<Vec<CheckReport>> {
    jobs_for(name, opts.max_n).map(|jobs| run_jobs(jobs, opts.timing))
}

/// The whole battery, in [`CHECK_NAMES`] order. Independent checks run on
/// the rayon pool; the report order does not depend on scheduling.
pub fn run_all(opts: BatteryOptions) -> Vec<CheckReport> {
    let jobs = CHECK_NAMES
        .iter()
        .flat_map(|name| jobs_for(name, opts.max_n).expect("known name"))
        .collect();
    run_jobs(jobs, opts.timing)
}
