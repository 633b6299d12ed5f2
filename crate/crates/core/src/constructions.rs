//! Constructive operations on full-group elements, each returning data that
//! can be checked by plain composition: first-return maps, the
//! periodic/positive/negative splitting, factorizations into induced maps,
//! periodic elements and involutions, n-cycle supports and escape times.

use bitvec::prelude::*;
use num_bigint::{BigInt, Sign};
use num_traits::{One, Zero};

use crate::full_group::mask;
use crate::{check_depth, ClopenSet, CycleClass, Dyadic, Error, FullGroupElement, Result};

/// First-return map of an element to a clopen set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InducedResult {
    /// `U_A`, the identity off `A`.
    pub element: FullGroupElement,
    /// Depth at which `return_times` is indexed.
    pub depth: u32,
    /// `(prefix, r)` for every member prefix of `A`, ascending.
    pub return_times: Vec<(u64, u64)>,
    /// `A` meets every prefix cycle carrying a nonzero cocycle value.
    pub meets_every_nontrivial_orbit: bool,
}

impl InducedResult {
    /// `Σ r(s) 2^-d`.
    pub fn return_time_integral(&self) -> Dyadic {
        let total: u128 = self.return_times.iter().map(|&(_, r)| u128::from(r)).sum();
        Dyadic::new(total, u64::from(self.depth))
    }
}

/// The first-return map `U_A`.
pub fn induce(u: &FullGroupElement, a: &ClopenSet) -> Result<InducedResult> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let depth = u.depth().max(a.depth());
    let cocycle = u.cocycle_at(depth);
    let perm = u.prefix_map_at(depth);
    let in_a = a.refined_bits(depth);
    let size = cocycle.len();

    let mut induced = vec![BigInt::zero(); size];
    let mut return_times = Vec::with_capacity(a.len_at(depth) as usize);
    let mut meets_all = true;
    let mut visited = bitvec![u64, Lsb0; 0; size];
    let mut cycle = Vec::new();

    for start in 0..size {
        if visited[start] {
            continue;
        }
        cycle.clear();
        let mut s = start;
        while !visited[s] {
            visited.set(s, true);
            cycle.push(s);
            s = perm[s] as usize;
        }
        let hits: Vec<usize> = (0..cycle.len()).filter(|&i| in_a[cycle[i]]).collect();
        if hits.is_empty() {
            if cycle.iter().any(|&s| !cocycle[s].is_zero()) {
                meets_all = false;
            }
            continue;
        }
        // excursion from hits[k] ends at the next hit around the cycle
        for (k, &i) in hits.iter().enumerate() {
            let next = hits.get(k + 1).copied().unwrap_or(hits[0] + cycle.len());
            let mut sum = BigInt::zero();
            for j in i..next {
                sum += &cocycle[cycle[j % cycle.len()]];
            }
            induced[cycle[i]] = sum;
            return_times.push((cycle[i] as u64, (next - i) as u64));
        }
    }
    return_times.sort_unstable();
    Ok(InducedResult {
        element: FullGroupElement::from_table(depth, induced),
        depth,
        return_times,
        meets_every_nontrivial_orbit: meets_all,
    })
}

/// `Σ_{s∈A} r_T(s) 2^-d` for the odometer, which always comes out as 1.
pub fn kac_check(a: &ClopenSet) -> Result<Dyadic> {
    Ok(induce(&FullGroupElement::odometer(), a)?.return_time_integral())
}

/// The involution exchanging `A` and `T(A)`: `+1` on `A`, `-1` on `T(A)`.
pub fn transposition(a: &ClopenSet) -> Result<FullGroupElement> {
    if a.is_empty() {
        return Ok(FullGroupElement::identity());
    }
    let image = a.translate(1);
    if let Some(prefix) = a.intersection(&image).members().next() {
        return Err(Error::Overlap { prefix });
    }
    let depth = a.depth();
    let cocycle = (0..1u64 << depth)
        .map(|s| {
            if a.contains(depth, s) {
                BigInt::one()
            } else if image.contains(depth, s) {
                -BigInt::one()
            } else {
                BigInt::zero()
            }
        })
        .collect();
    Ok(FullGroupElement::from_table(depth, cocycle))
}

/// `S = periodic ∘ positive ∘ negative` with pairwise disjoint supports.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Pnp {
    pub periodic: FullGroupElement,
    pub positive: FullGroupElement,
    pub negative: FullGroupElement,
}

/// Splits `S` according to the displacement sign of each prefix cycle.
pub fn decompose_pnp(s: &FullGroupElement) -> Pnp {
    let depth = s.depth();
    let size = s.cocycle().len();
    let mut parts = [
        vec![BigInt::zero(); size],
        vec![BigInt::zero(); size],
        vec![BigInt::zero(); size],
    ];
    for cycle in s.orbit_decomposition().cycles {
        let slot = match cycle.class {
            CycleClass::Trivial => continue,
            CycleClass::Periodic => 0,
            CycleClass::Positive => 1,
            CycleClass::Negative => 2,
        };
        for p in cycle.prefixes {
            parts[slot][p as usize] = s.cocycle()[p as usize].clone();
        }
    }
    let [p, pos, neg] = parts;
    Pnp {
        periodic: FullGroupElement::from_table(depth, p),
        positive: FullGroupElement::from_table(depth, pos),
        negative: FullGroupElement::from_table(depth, neg),
    }
}

/// An almost positive `S` rewritten as `left_periodic ∘ positive` and
/// `positive ∘ right_periodic`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Positivized {
    /// Points whose forward cocycle sums are all strictly positive.
    pub set: ClopenSet,
    /// `S_A`, induced by `S` on `set`.
    pub positive: FullGroupElement,
    /// `S ∘ S_A⁻¹`.
    pub left_periodic: FullGroupElement,
    /// `S_A⁻¹ ∘ S`.
    pub right_periodic: FullGroupElement,
}

/// Replaces an almost positive element by a positive one up to periodic
/// factors. The identity is accepted and yields identities.
pub fn positivize(s: &FullGroupElement) -> Result<Positivized> {
    let depth = s.depth();
    let mut members = Vec::new();
    for cycle in s.orbit_decomposition().cycles {
        match cycle.class {
            CycleClass::Trivial => continue,
            CycleClass::Periodic | CycleClass::Negative => {
                return Err(Error::NotAlmostPositive {
                    prefix: cycle.prefixes[0],
                    displacement: cycle.displacement.to_string(),
                })
            }
            CycleClass::Positive => {}
        }
        // partial sums P[0..=2L] around the cycle twice; since
        // P[j+L] = P[j] + D with D > 0, the minimum of P over (i, 2L] is
        // the minimum of the first L forward sums from position i
        let len = cycle.prefixes.len();
        let mut prefix_sums = Vec::with_capacity(2 * len + 1);
        prefix_sums.push(BigInt::zero());
        for j in 0..2 * len {
            let n = &s.cocycle()[cycle.prefixes[j % len] as usize];
            let next = prefix_sums[j].clone() + n;
            prefix_sums.push(next);
        }
        let mut suffix_min = prefix_sums.clone();
        for j in (0..2 * len).rev() {
            if suffix_min[j + 1] < suffix_min[j] {
                suffix_min[j] = suffix_min[j + 1].clone();
            }
        }
        for i in 0..len {
            if suffix_min[i + 1] > prefix_sums[i] {
                members.push(cycle.prefixes[i]);
            }
        }
    }
    let set = ClopenSet::new(depth, members)?;
    if set.is_empty() {
        let id = FullGroupElement::identity();
        return Ok(Positivized {
            set,
            positive: id.clone(),
            left_periodic: id.clone(),
            right_periodic: id,
        });
    }
    let positive = induce(s, &set)?.element;
    let inv = positive.inverse();
    Ok(Positivized {
        left_periodic: s.compose(&inv),
        right_periodic: inv.compose(s),
        set,
        positive,
    })
}

/// One letter of a factorization word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Factor {
    /// The odometer induced on a set, `T_A`.
    InducedOn(ClopenSet),
    Periodic(FullGroupElement),
    /// An element of order two.
    Involution(FullGroupElement),
    /// `I_{T,A}`, exchanging `A` and `T(A)`.
    Transposition(ClopenSet),
    PowerOfT(BigInt),
}

impl Factor {
    pub fn kind(&self) -> &'static str {
        match self {
            Factor::InducedOn(_) => "induced_on",
            Factor::Periodic(_) => "periodic",
            Factor::Involution(_) => "involution",
            Factor::Transposition(_) => "transposition",
            Factor::PowerOfT(_) => "power_of_T",
        }
    }

    pub fn element(&self) -> Result<FullGroupElement> {
        match self {
            Factor::InducedOn(a) => Ok(induce(&FullGroupElement::odometer(), a)?.element),
            Factor::Periodic(e) | Factor::Involution(e) => Ok(e.clone()),
            Factor::Transposition(a) => transposition(a),
            Factor::PowerOfT(k) => Ok(FullGroupElement::odometer_power(k.clone())),
        }
    }

    /// Whether the factor has the property its tag promises.
    pub fn is_well_formed(&self) -> bool {
        match self {
            Factor::InducedOn(a) => !a.is_empty(),
            Factor::Periodic(e) => e.is_periodic().is_some(),
            Factor::Involution(e) => e.is_involution(),
            Factor::Transposition(a) => transposition(a).is_ok(),
            Factor::PowerOfT(_) => true,
        }
    }
}

/// A word whose factors, applied right to left, reproduce `target`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorizationCertificate {
    pub target: FullGroupElement,
    pub word: Vec<Factor>,
    pub verified: bool,
}

impl FactorizationCertificate {
    /// Builds the certificate and checks it.
    pub fn new(target: FullGroupElement, word: Vec<Factor>) -> Self {
        let mut cert = FactorizationCertificate {
            target,
            word,
            verified: false,
        };
        cert.verified = cert.check();
        cert
    }

    /// `f_1 ∘ f_2 ∘ … ∘ f_k`.
    pub fn product(&self) -> Result<FullGroupElement> {
        self.word
            .iter()
            .try_fold(FullGroupElement::identity(), |acc, f| Ok(acc.compose(&f.element()?)))
    }

    /// Recomputes the product and checks each factor against its tag.
    pub fn check(&self) -> bool {
        self.word.iter().all(Factor::is_well_formed)
            && self.product().is_ok_and(|p| p == self.target)
    }
}

/// Writes a positive element as a product of maps induced by `T`.
///
/// Peels off `T_A` with `A = supp S` until nothing is left; each round lowers
/// the index by one, so the word has exactly `index(S)` letters.
pub fn factor_positive(s: &FullGroupElement) -> Result<FactorizationCertificate> {
    if let Some((p, n)) = s
        .cocycle()
        .iter()
        .enumerate()
        .find(|(_, n)| n.sign() == Sign::Minus)
    {
        return Err(Error::NotPositive {
            prefix: p as u64,
            value: n.to_string(),
        });
    }
    let t = FullGroupElement::odometer();
    let steps = s.index();
    let mut sets = Vec::new();
    let mut rest = s.clone();
    while !rest.is_identity() && BigInt::from(sets.len()) < steps {
        let support = rest.support();
        let induced = induce(&t, &support)?.element;
        rest = rest.compose(&induced.inverse());
        sets.push(support);
    }
    // rest = S ∘ T_{A_1}⁻¹ ∘ … ∘ T_{A_k}⁻¹, so S = T_{A_k} ∘ … ∘ T_{A_1}
    let word = sets.into_iter().rev().map(Factor::InducedOn).collect();
    Ok(FactorizationCertificate::new(s.clone(), word))
}

/// Writes `U` as a product of periodic elements followed by `T^{index(U)}`.
pub fn normal_form(u: &FullGroupElement) -> Result<FactorizationCertificate> {
    enum Token {
        Periodic(FullGroupElement),
        Power(i64),
    }
    let t_inv = FullGroupElement::odometer_power(-1);
    let pnp = decompose_pnp(u);
    let mut tokens = vec![Token::Periodic(pnp.periodic)];

    // positive part: S₊ = left ∘ T_{A_1} ∘ … ∘ T_{A_k}, T_A = (T_A T⁻¹) T
    let plus = positivize(&pnp.positive)?;
    tokens.push(Token::Periodic(plus.left_periodic));
    for f in factor_positive(&plus.positive)?.word {
        let induced = f.element()?;
        tokens.push(Token::Periodic(induced.compose(&t_inv)));
        tokens.push(Token::Power(1));
    }

    // negative part: S₋⁻¹ = left' ∘ T_{B_1} ∘ … ∘ T_{B_j}, inverted factor by factor
    let minus = positivize(&pnp.negative.inverse())?;
    let letters = factor_positive(&minus.positive)?.word;
    for f in letters.iter().rev() {
        let induced = f.element()?;
        tokens.push(Token::Power(-1));
        tokens.push(Token::Periodic(induced.compose(&t_inv).inverse()));
    }
    tokens.push(Token::Periodic(minus.left_periodic.inverse()));

    // (∏ out) ∘ T^p ∘ Q = (∏ out) ∘ (T^p Q T^-p) ∘ T^p
    let mut power = BigInt::zero();
    let mut word = Vec::new();
    for token in tokens {
        match token {
            Token::Power(k) => power += k,
            Token::Periodic(q) if q.is_identity() => {}
            Token::Periodic(q) => word.push(Factor::Periodic(q.conjugate_by_odometer(&power))),
        }
    }
    let index_matches = power == u.index();
    word.push(Factor::PowerOfT(power));
    let mut cert = FactorizationCertificate::new(u.clone(), word);
    cert.verified &= index_matches;
    Ok(cert)
}

/// Writes a periodic element as a product of involutions.
///
/// On a cycle `C_0 → C_1 → … → C_{L-1} → C_0` of cylinders with zero
/// displacement, `U` permutes the levels `C_j` cyclically, and
/// `(0 1 … L-1) = (0 1)(1 2)…(L-2 L-1)`. The `j`-th involution swaps `C_j`
/// and `C_{j+1}` along `U`; involutions with the same `j` on different cycles
/// are merged into one factor.
pub fn factor_periodic_into_involutions(u: &FullGroupElement) -> Result<FactorizationCertificate> {
    let depth = u.depth();
    let size = u.cocycle().len();
    let mut tables: Vec<Vec<BigInt>> = Vec::new();
    for cycle in u.orbit_decomposition().cycles {
        match cycle.class {
            CycleClass::Trivial => continue,
            CycleClass::Positive | CycleClass::Negative => {
                return Err(Error::NotPeriodic {
                    prefix: cycle.prefixes[0],
                    displacement: cycle.displacement.to_string(),
                })
            }
            CycleClass::Periodic => {}
        }
        // prefixes[0] is the smallest prefix: the fundamental domain
        for (j, pair) in cycle.prefixes.windows(2).enumerate() {
            if tables.len() <= j {
                tables.push(vec![BigInt::zero(); size]);
            }
            let n = &u.cocycle()[pair[0] as usize];
            tables[j][pair[0] as usize] = n.clone();
            tables[j][pair[1] as usize] = -n;
        }
    }
    let word = tables
        .into_iter()
        .map(|t| Factor::Involution(FullGroupElement::from_table(depth, t)))
        .collect();
    Ok(FactorizationCertificate::new(u.clone(), word))
}

/// Outcome of [`ncycle_support_test`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NCycleVerdict {
    pub found: bool,
    /// `B` with `A = B ⊔ T_A(B) ⊔ … ⊔ T_A^{m-1}(B)`.
    pub witness: Option<ClopenSet>,
    /// Depth of the cylinders making up the witness.
    pub witness_depth: Option<u32>,
    /// `oddpart(m) | N` and `v₂(m) ≤ v₂(N) + E`, with `N` the cylinder count of `A`.
    pub closed_form: bool,
}

/// Searches depths `d..=d+E` for a clopen `B` whose first `m` images under
/// `T_A` tile `A`, and compares with the arithmetic criterion.
pub fn ncycle_support_test(a: &ClopenSet, m: u64, max_extra_depth: u32) -> Result<NCycleVerdict> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    assert!(m >= 2, "cycle length must be at least 2");
    let count = a.len();
    let twos = m.trailing_zeros();
    let closed_form = count.is_multiple_of(odd_part(m)) && twos <= count.trailing_zeros() + max_extra_depth;

    let induced = induce(&FullGroupElement::odometer(), a)?.element;
    let mut verdict = NCycleVerdict {
        found: false,
        witness: None,
        witness_depth: None,
        closed_form,
    };
    for extra in 0..=max_extra_depth {
        let depth = a.depth() + extra;
        check_depth(depth)?;
        if let Some(b) = tiling_candidate(&induced, a, depth, m) {
            verdict.found = true;
            verdict.witness = Some(b);
            verdict.witness_depth = Some(depth);
            break;
        }
    }
    if verdict.found != verdict.closed_form {
        return Err(Error::CriterionMismatch { m, count });
    }
    Ok(verdict)
}

/// Every `m`-th depth-`depth` cylinder along each `T_A`-cycle in `A`, kept
/// only if its images really tile `A`.
fn tiling_candidate(
    induced: &FullGroupElement,
    a: &ClopenSet,
    depth: u32,
    m: u64,
) -> Option<ClopenSet> {
    let perm = induced.prefix_map_at(depth);
    let members = a.members_at(depth);
    let mut visited = bitvec![u64, Lsb0; 0; perm.len()];
    let mut chosen = Vec::new();
    for &start in &members {
        let mut s = start as usize;
        let mut pos = 0u64;
        while !visited[s] {
            visited.set(s, true);
            if pos.is_multiple_of(m) {
                chosen.push(s as u64);
            }
            pos += 1;
            s = perm[s] as usize;
        }
    }
    let b = ClopenSet::new(depth, chosen).ok()?;
    let mut covered = ClopenSet::empty();
    let mut image = b.clone();
    for _ in 0..m {
        if !covered.is_disjoint(&image) {
            return None;
        }
        covered = covered.union(&image);
        image = induced.apply_to_set(&image);
    }
    (covered == *a).then_some(b)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EscapeIntegral {
    Finite(Dyadic),
    Infinite,
}

/// Escape times `τ_A` per member cylinder.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeTime {
    pub depth: u32,
    /// `(prefix, τ)`, ascending; `None` is an infinite escape time.
    pub table: Vec<(u64, Option<u64>)>,
    pub integral: EscapeIntegral,
}

/// `τ(s)` is the least `k ≥ 1` with `s + k` or `s - k` outside `A` (mod `2^d`).
pub fn escape_time(a: &ClopenSet) -> Result<EscapeTime> {
    if a.is_empty() {
        return Err(Error::EmptySet);
    }
    let depth = a.depth();
    if a.is_full() {
        return Ok(EscapeTime {
            depth,
            table: vec![(0, None)],
            integral: EscapeIntegral::Infinite,
        });
    }
    let size = 1u64 << depth;
    let m = mask(depth);
    let outside = a
        .complement()
        .members_at(depth)
        .first()
        .copied()
        .expect("a non-full set has a gap");
    // walk once around the cycle starting just after a gap, so every run of
    // members is seen whole; the j-th cylinder of a run of length L escapes
    // after min(j + 1, L - j) steps
    let mut table = Vec::with_capacity(a.len() as usize);
    let mut run: Vec<u64> = Vec::new();
    let flush = |run: &mut Vec<u64>, table: &mut Vec<(u64, Option<u64>)>| {
        let len = run.len() as u64;
        for (j, &s) in run.iter().enumerate() {
            let j = j as u64;
            table.push((s, Some((j + 1).min(len - j))));
        }
        run.clear();
    };
    for step in 1..=size {
        let s = (outside + step) & m;
        if a.contains(depth, s) {
            run.push(s);
        } else {
            flush(&mut run, &mut table);
        }
    }
    flush(&mut run, &mut table);
    table.sort_unstable();
    let total: u128 = table.iter().map(|&(_, t)| u128::from(t.unwrap_or(0))).sum();
    Ok(EscapeTime {
        depth,
        table,
        integral: EscapeIntegral::Finite(Dyadic::new(total, u64::from(depth))),
    })
}

/// One row of [`escape_tower_family`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EscapeRow {
    pub m: u32,
    pub depth: u32,
    pub measure: Dyadic,
    pub integral: Dyadic,
}

/// `A_m` = the first `4^m` levels of the height-`8^m` odometer tower over a
/// depth-`3m` cylinder, for `m = 1..=m_max`. Measures shrink like `2^-m`
/// while escape integrals grow without bound.
pub fn escape_tower_family(m_max: u32) -> Result<Vec<EscapeRow>> {
    check_depth(3 * m_max)?;
    (1..=m_max)
        .map(|m| {
            let depth = 3 * m;
            let a = ClopenSet::new(depth, 0..1u64 << (2 * m))?;
            let integral = match escape_time(&a)?.integral {
                EscapeIntegral::Finite(v) => v,
                EscapeIntegral::Infinite => unreachable!("A_m is a proper subset"),
            };
            Ok(EscapeRow {
                m,
                depth,
                measure: a.measure(),
                integral,
            })
        })
        .collect()
}

/// `2^{v₂(n)}`-free part of `n`.
pub fn odd_part(n: u64) -> u64 {
    if n == 0 {
        0
    } else {
        n >> n.trailing_zeros()
    }
}
