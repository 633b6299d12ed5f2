//! Seeded property suites behind `ergo verify`.

use std::time::{Duration, Instant};

use ergo_core::json::{element_to_json, set_to_json};
use ergo_core::sample::{random_induced_product, random_nonempty_set, random_periodic};
use ergo_core::*;
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Suite {
    All,
    Group,
    Kac,
    Index,
    Decompose,
    Factor,
    Escape,
    Counterexample,
}

impl Suite {
    const PARTS: [Suite; 7] = [
        Suite::Group,
        Suite::Kac,
        Suite::Index,
        Suite::Decompose,
        Suite::Factor,
        Suite::Escape,
        Suite::Counterexample,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::All => "all",
            Suite::Group => "group",
            Suite::Kac => "kac",
            Suite::Index => "index",
            Suite::Decompose => "decompose",
            Suite::Factor => "factor",
            Suite::Escape => "escape",
            Suite::Counterexample => "counterexample",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Scale {
    Quick,
    Full,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub suite: &'static str,
    pub check: String,
    pub input: Value,
}

#[derive(Debug, Clone)]
pub struct RunReport {
    pub suite: &'static str,
    pub seed: u64,
    pub scale: Scale,
    pub cases: u64,
    pub failures: Vec<Failure>,
    pub wall_time: Duration,
    pub exit_status: i32,
}

impl RunReport {
    /// Everything except the wall time.
    pub fn same_outcome(&self, other: &RunReport) -> bool {
        (self.suite, self.seed, self.scale, self.cases, &self.failures, self.exit_status)
            == (other.suite, other.seed, other.scale, other.cases, &other.failures, other.exit_status)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite,
            "seed": self.seed,
            "scale": match self.scale { Scale::Quick => "quick", Scale::Full => "full" },
            "cases": self.cases,
            "failures": self.failures.iter().map(|f| json!({
                "suite": f.suite,
                "check": f.check,
                "input": f.input,
            })).collect::<Vec<_>>(),
            "wall_time_ms": self.wall_time.as_millis() as u64,
            "exit_status": self.exit_status,
        })
    }
}

/// Runs `suite` deterministically from `seed`.
pub fn run_verify(suite: Suite, seed: u64, scale: Scale) -> RunReport {
    let start = Instant::now();
    let parts: Vec<Suite> = match suite {
        Suite::All => Suite::PARTS.to_vec(),
        one => vec![one],
    };
    let mut cases = 0;
    let mut failures = Vec::new();
    for part in parts {
        let mut r = Runner {
            suite: part.name(),
            rng: ChaCha8Rng::seed_from_u64(seed ^ (part as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15)),
            full: scale == Scale::Full,
            cases: 0,
            failures: Vec::new(),
        };
        match part {
            Suite::Group => group(&mut r),
            Suite::Kac => kac(&mut r),
            Suite::Index => index(&mut r),
            Suite::Decompose => decompose(&mut r),
            Suite::Factor => factor(&mut r),
            Suite::Escape => escape(&mut r),
            Suite::Counterexample => counterexample(&mut r),
            Suite::All => unreachable!(),
        }
        cases += r.cases;
        failures.extend(r.failures);
    }
    let exit_status = if failures.is_empty() { 0 } else { 1 };
    RunReport {
        suite: suite.name(),
        seed,
        scale,
        cases,
        failures,
        wall_time: start.elapsed(),
        exit_status,
    }
}

struct Runner {
    suite: &'static str,
    rng: ChaCha8Rng,
    full: bool,
    cases: u64,
    failures: Vec<Failure>,
}

impl Runner {
    fn size(&self, quick: usize, full: usize) -> usize {
        if self.full {
            full
        } else {
            quick
        }
    }

    fn element(&mut self, max_depth: u32, wrap: u64) -> FullGroupElement {
        let depth = self.rng.random_range(0..=max_depth);
        random_element_with(&mut self.rng, depth, wrap).expect("depth within the cap")
    }

    fn set(&mut self, min_depth: u32, max_depth: u32) -> ClopenSet {
        let depth = self.rng.random_range(min_depth..=max_depth);
        let density = self.rng.random_range(0.02..1.0);
        random_nonempty_set(&mut self.rng, depth, density).expect("depth within the cap")
    }

    fn check(&mut self, check: &str, ok: bool, input: impl FnOnce() -> Value) {
        if !ok {
            self.failures.push(Failure {
                suite: self.suite,
                check: check.to_owned(),
                input: input(),
            });
        }
    }

    /// Records an error as a failure and yields `None`.
    fn ok<T>(&mut self, check: &str, r: Result<T>, input: impl FnOnce() -> Value) -> Option<T> {
        match r {
            Ok(v) => Some(v),
            Err(e) => {
                let mut input = input();
                input["error"] = Value::from(e.to_string());
                self.check(check, false, || input);
                None
            }
        }
    }
}

fn el(u: &FullGroupElement) -> Value {
    element_to_json(u)
}

fn group(r: &mut Runner) {
    let max_depth = if r.full { 8 } else { 6 };
    for _ in 0..r.size(10_000, 100_000) {
        let (u, v, w) = (r.element(max_depth, 8), r.element(max_depth, 8), r.element(max_depth, 8));
        let inputs = || json!({ "U": el(&u), "V": el(&v), "W": el(&w) });
        r.check("associativity", u.compose(&v).compose(&w) == u.compose(&v.compose(&w)), inputs);
        r.check("inverse", u.compose(&u.inverse()).is_identity(), inputs);
        r.check("index homomorphism", u.compose(&v).index() == u.index() + v.index(), inputs);
        r.check("commutator index", u.commutator(&v).index() == BigInt::from(0), inputs);
        r.check(
            "L1 right invariance",
            u.compose(&w).metric(&v.compose(&w), Metric::L1) == u.metric(&v, Metric::L1),
            inputs,
        );
        r.check(
            "uniform below L1",
            u.metric(&v, Metric::Uniform) <= u.metric(&v, Metric::L1),
            inputs,
        );
        r.cases += 1;
    }
}

fn kac(r: &mut Runner) {
    let mut sets = Vec::new();
    for depth in 0..=4u32 {
        for mask in 1u64..1 << (1u64 << depth) {
            let prefixes = (0..1u64 << depth).filter(|i| mask >> i & 1 == 1);
            sets.push(ClopenSet::new(depth, prefixes).expect("prefixes in range"));
        }
    }
    for depth in 5..=8 {
        for _ in 0..r.size(500, 25_000) {
            sets.push(r.set(depth, depth));
        }
    }
    for a in sets {
        let v = r.ok("kac", kac_check(&a), || json!({ "A": set_to_json(&a) }));
        if let Some(v) = v {
            r.check("kac", v == Dyadic::one(), || json!({ "A": set_to_json(&a), "got": v.to_string() }));
        }
        r.cases += 1;
    }
}

fn index(r: &mut Runner) {
    for _ in 0..r.size(2_000, 10_000) {
        let u = r.element(12, 8);
        let sum: BigInt = u.cocycle().iter().sum();
        let divisible = sum % (BigInt::from(1) << u.depth()) == BigInt::from(0);
        r.check("index integrality", divisible && u.index_dyadic().is_integer(), || {
            json!({ "U": el(&u) })
        });
        r.cases += 1;
    }
    for _ in 0..r.size(500, 10_000) {
        let u = r.element(10, 4);
        let a = r.set(0, 10);
        let inputs = || json!({ "U": el(&u), "A": set_to_json(&a) });
        if let Some(res) = r.ok("induce", induce(&u, &a), inputs) {
            if res.meets_every_nontrivial_orbit {
                r.check("induced index", res.element.index() == u.index(), inputs);
            }
            let id = FullGroupElement::identity();
            r.check(
                "induced distance",
                res.element.metric(&id, Metric::L1) <= u.metric(&id, Metric::L1),
                inputs,
            );
        }
        r.cases += 1;
    }
    for _ in 0..r.size(500, 10_000) {
        let d = r.rng.random_range(0..=8);
        let w = r.rng.random_range(0..=4);
        let u = random_periodic(&mut r.rng, d, w).expect("depth within the cap");
        r.check("periodic index", u.index() == BigInt::from(0), || json!({ "U": el(&u) }));
        r.cases += 1;
    }
}

fn decompose(r: &mut Runner) {
    for _ in 0..r.size(1_000, 20_000) {
        let u = r.element(8, 4);
        let inputs = || json!({ "U": el(&u) });
        let p = decompose_pnp(&u);
        r.check(
            "recomposition",
            p.periodic.compose(&p.positive).compose(&p.negative) == u,
            inputs,
        );
        let (a, b, c) = (p.periodic.support(), p.positive.support(), p.negative.support());
        r.check(
            "disjoint supports",
            a.is_disjoint(&b) && a.is_disjoint(&c) && b.is_disjoint(&c),
            inputs,
        );
        r.check("periodic part", p.periodic.is_periodic().is_some(), inputs);
        if let Some(q) = r.ok("positivize", positivize(&p.positive), inputs) {
            r.check(
                "positivize",
                q.positive.is_positive()
                    && q.positive.index() == p.positive.index()
                    && q.left_periodic.is_periodic().is_some()
                    && q.right_periodic.is_periodic().is_some()
                    && q.left_periodic.compose(&q.positive) == p.positive,
                inputs,
            );
        }
        r.cases += 1;
    }
}

fn factor(r: &mut Runner) {
    let n = r.size(300, 3_000);
    for i in 0..n {
        let u = if i % 2 == 0 {
            r.element(8, 0)
        } else {
            let count = r.rng.random_range(0..=6);
            random_induced_product(&mut r.rng, 6, count).expect("depth within the cap")
        };
        let inputs = || json!({ "S": el(&u) });
        if let Some(c) = r.ok("factor_positive", factor_positive(&u), inputs) {
            r.check(
                "factor_positive",
                c.verified && BigInt::from(c.word.len()) == u.index(),
                inputs,
            );
        }
        r.cases += 1;
    }
    for _ in 0..n {
        let u = r.element(6, 2);
        let inputs = || json!({ "U": el(&u) });
        if let Some(c) = r.ok("normal_form", normal_form(&u), inputs) {
            let trailing = c.word.last() == Some(&Factor::PowerOfT(u.index()));
            let periodic = c.word.iter().all(Factor::is_well_formed);
            r.check("normal_form", c.verified && trailing && periodic, inputs);
        }
        r.cases += 1;
    }
    for _ in 0..n {
        let d = r.rng.random_range(0..=8);
        let w = r.rng.random_range(0..=4);
        let u = random_periodic(&mut r.rng, d, w).expect("depth within the cap");
        let inputs = || json!({ "U": el(&u) });
        if let Some(c) = r.ok("involutions", factor_periodic_into_involutions(&u), inputs) {
            let involutions = c
                .word
                .iter()
                .all(|f| f.element().is_ok_and(|e| e.is_involution()));
            r.check("involutions", c.verified && involutions, inputs);
        }
        r.cases += 1;
    }
}

/// Least `k ≥ 1` with `s + k` or `s - k` outside `A`, walking prefixes.
fn walk_escape(a: &ClopenSet, s: u64) -> Option<u64> {
    let d = a.depth();
    let mask = (1u64 << d) - 1;
    (1..=1u64 << (d + 1)).find(|&k| {
        !a.contains(d, s.wrapping_add(k) & mask) || !a.contains(d, s.wrapping_sub(k) & mask)
    })
}

fn escape(r: &mut Runner) {
    let mut sets = Vec::new();
    for mask in 1u64..256 {
        sets.push(ClopenSet::new(3, (0..8).filter(|i| mask >> i & 1 == 1)).expect("depth 3"));
    }
    for _ in 0..r.size(200, 3_000) {
        sets.push(r.set(4, 8));
    }
    for a in sets {
        let inputs = || json!({ "A": set_to_json(&a) });
        if let Some(e) = r.ok("escape_time", escape_time(&a), inputs) {
            let table_ok = e.table.iter().all(|&(s, tau)| tau == walk_escape(&a, s));
            let integral_ok = match &e.integral {
                EscapeIntegral::Infinite => a.is_full(),
                EscapeIntegral::Finite(v) => {
                    let total: u64 = a.members().filter_map(|s| walk_escape(&a, s)).sum();
                    *v == Dyadic::new(total, u64::from(a.depth()))
                }
            };
            r.check("escape table", table_ok && integral_ok, inputs);
        }
        r.cases += 1;
    }
    if let Some(rows) = r.ok("escape family", escape_tower_family(6), || json!({ "m_max": 6 })) {
        for (i, row) in rows.iter().enumerate() {
            let mut ok = row.measure == Dyadic::pow2_inv(u64::from(row.m));
            if i > 0 {
                let prev = &rows[i - 1].integral;
                ok &= row.integral > *prev
                    && &Dyadic::from_integer(2) * &row.integral >= &Dyadic::from_integer(3) * prev;
            }
            r.check("escape family", ok, || json!({ "m": row.m }));
            r.cases += 1;
        }
    }
}

fn counterexample(r: &mut Runner) {
    let n_max = r.size(10, 16) as u32;
    let Some(report) = r.ok("counterexample", counterexample_report(n_max), || {
        json!({ "n_max": n_max })
    }) else {
        return;
    };
    for row in &report.rows {
        r.check(
            "counterexample row",
            row.d_t == Dyadic::pow2_inv(1) && row.d_ta == Dyadic::pow2_inv(u64::from(row.n) + 1),
            || json!({ "n": row.n, "d_T": row.d_t.to_string(), "d_TA": row.d_ta.to_string() }),
        );
        r.cases += 1;
    }
    let involutions = (1..=n_max.min(12))
        .all(|n| counterexample_element(n).is_ok_and(|u| u.is_involution()));
    r.check("counterexample involutions", involutions, || json!({ "n_max": n_max }));
    r.cases += 1;
}
