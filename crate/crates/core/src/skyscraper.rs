//! Finite Kakutani skyscrapers and elements that move points inside towers.
//!
//! `T` climbs each tower one level at a time. What happens at the top of a
//! tower (the return through the base) is left unspecified: no element here
//! ever crosses a top, so distances only depend on within-tower displacements.

use std::collections::{BTreeMap, BTreeSet};

use crate::{Dyadic, Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tower {
    pub height: u64,
    /// Measure of each level.
    pub base: Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerSystem {
    towers: Vec<Tower>,
    total_mass: Dyadic,
}

impl TowerSystem {
    pub fn new(shape: impl IntoIterator<Item = (u64, Dyadic)>) -> Result<Self> {
        let mut towers = Vec::new();
        let mut total_mass = Dyadic::zero();
        for (height, base) in shape {
            if height == 0 {
                return Err(Error::InvalidTower("height must be positive".into()));
            }
            if base <= Dyadic::zero() {
                return Err(Error::InvalidTower(format!(
                    "base measure {base} must be positive"
                )));
            }
            total_mass = &total_mass + &(&Dyadic::from_integer(height) * &base);
            towers.push(Tower { height, base });
        }
        if total_mass > Dyadic::one() {
            return Err(Error::MassExceedsOne {
                mass: total_mass.to_string(),
            });
        }
        Ok(TowerSystem { towers, total_mass })
    }

    pub fn towers(&self) -> &[Tower] {
        &self.towers
    }

    pub fn total_mass(&self) -> &Dyadic {
        &self.total_mass
    }

    /// Mass not covered by the represented towers.
    pub fn mass_deficit(&self) -> Dyadic {
        &Dyadic::one() - &self.total_mass
    }
}

/// A within-tower permutation of levels: level `(t, i)` goes to
/// `(t, i + n(t, i))`. Only nonzero shifts are stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TowerElement {
    system: TowerSystem,
    shifts: Vec<BTreeMap<u64, i64>>,
}

impl TowerElement {
    pub fn identity(system: TowerSystem) -> Self {
        let shifts = vec![BTreeMap::new(); system.towers.len()];
        TowerElement { system, shifts }
    }

    /// Dense shift tables, one per tower, each as long as the tower.
    pub fn new(system: TowerSystem, shifts: Vec<Vec<i64>>) -> Result<Self> {
        if shifts.len() != system.towers.len() {
            return Err(Error::InvalidTower(format!(
                "{} shift tables for {} towers",
                shifts.len(),
                system.towers.len()
            )));
        }
        for (t, (table, tower)) in shifts.iter().zip(&system.towers).enumerate() {
            if table.len() as u64 != tower.height {
                return Err(Error::InvalidTower(format!(
                    "tower {t}: {} shifts for height {}",
                    table.len(),
                    tower.height
                )));
            }
        }
        let sparse = shifts
            .into_iter()
            .map(|table| {
                table
                    .into_iter()
                    .enumerate()
                    .filter(|&(_, n)| n != 0)
                    .map(|(i, n)| (i as u64, n))
                    .collect()
            })
            .collect();
        Self::from_sparse(system, sparse)
    }

    /// Nonzero shifts only, as `level -> shift` per tower.
    pub fn from_sparse(system: TowerSystem, shifts: Vec<BTreeMap<u64, i64>>) -> Result<Self> {
        if shifts.len() != system.towers.len() {
            return Err(Error::InvalidTower(format!(
                "{} shift tables for {} towers",
                shifts.len(),
                system.towers.len()
            )));
        }
        for (t, (table, tower)) in shifts.iter().zip(&system.towers).enumerate() {
            let mut sources: BTreeMap<u64, u64> = BTreeMap::new();
            for (&level, &shift) in table {
                let target = i128::from(level) + i128::from(shift);
                if level >= tower.height || target < 0 || target >= i128::from(tower.height) {
                    return Err(Error::CrossesTop {
                        tower: t,
                        level,
                        shift,
                    });
                }
                let target = target as u64;
                if shift == 0 {
                    continue;
                }
                // fixed levels map to themselves, so a moved level may only
                // land on another moved level
                if !table.get(&target).is_some_and(|&n| n != 0) {
                    return Err(Error::TowerNotBijective {
                        tower: t,
                        first: level,
                        second: target,
                        target,
                    });
                }
                if let Some(first) = sources.insert(target, level) {
                    return Err(Error::TowerNotBijective {
                        tower: t,
                        first,
                        second: level,
                        target,
                    });
                }
            }
        }
        let shifts = shifts
            .into_iter()
            .map(|table| table.into_iter().filter(|&(_, n)| n != 0).collect())
            .collect();
        Ok(TowerElement { system, shifts })
    }

    pub fn system(&self) -> &TowerSystem {
        &self.system
    }

    /// Nonzero shifts of tower `t`.
    pub fn moved_levels(&self, t: usize) -> &BTreeMap<u64, i64> {
        &self.shifts[t]
    }

    pub fn shift(&self, t: usize, level: u64) -> i64 {
        self.shifts[t].get(&level).copied().unwrap_or(0)
    }

    /// Dense shift table of tower `t`.
    pub fn dense_shifts(&self, t: usize) -> Vec<i64> {
        (0..self.system.towers[t].height)
            .map(|i| self.shift(t, i))
            .collect()
    }

    pub fn is_identity(&self) -> bool {
        self.shifts.iter().all(BTreeMap::is_empty)
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &TowerElement) -> Result<TowerElement> {
        if self.system != other.system {
            return Err(Error::SystemMismatch);
        }
        let shifts = (0..self.shifts.len())
            .map(|t| {
                let levels: BTreeSet<u64> = self.shifts[t]
                    .keys()
                    .chain(other.shifts[t].keys())
                    .copied()
                    .collect();
                levels
                    .into_iter()
                    .filter_map(|i| {
                        let first = other.shift(t, i);
                        let mid = (i as i64 + first) as u64;
                        let total = first + self.shift(t, mid);
                        (total != 0).then_some((i, total))
                    })
                    .collect()
            })
            .collect();
        Ok(TowerElement {
            system: self.system.clone(),
            shifts,
        })
    }

    pub fn inverse(&self) -> TowerElement {
        let shifts = self
            .shifts
            .iter()
            .map(|table| {
                table
                    .iter()
                    .map(|(&i, &n)| ((i as i64 + n) as u64, -n))
                    .collect()
            })
            .collect();
        TowerElement {
            system: self.system.clone(),
            shifts,
        }
    }

    pub fn is_involution(&self) -> bool {
        self.compose(self).is_ok_and(|sq| sq.is_identity())
    }

    /// Measure of the moved levels.
    pub fn support_measure(&self) -> Dyadic {
        self.shifts
            .iter()
            .zip(&self.system.towers)
            .map(|(table, tower)| &Dyadic::from_integer(table.len() as u64) * &tower.base)
            .sum()
    }
}

/// Distance between two tower elements.
///
/// Without `induced_on` this is `Σ b_t |n_U(t,i) - n_V(t,i)|`. With a level
/// set `A_t` per tower, displacements are counted in steps of the induced map
/// `T_A`, i.e. as differences of positions along the sorted level set.
pub fn tower_metric(
    u: &TowerElement,
    v: &TowerElement,
    induced_on: Option<&[BTreeSet<u64>]>,
) -> Result<Dyadic> {
    if u.system != v.system {
        return Err(Error::SystemMismatch);
    }
    let towers = &u.system.towers;
    if let Some(sets) = induced_on {
        if sets.len() != towers.len() {
            return Err(Error::InvalidTower(format!(
                "{} level sets for {} towers",
                sets.len(),
                towers.len()
            )));
        }
    }
    let mut total = Dyadic::zero();
    for (t, tower) in towers.iter().enumerate() {
        let levels: BTreeSet<u64> = u.shifts[t]
            .keys()
            .chain(v.shifts[t].keys())
            .copied()
            .collect();
        let mut steps: u128 = 0;
        for i in levels {
            let nu = u.shift(t, i);
            let nv = v.shift(t, i);
            steps += match induced_on {
                None => u128::from(nu.abs_diff(nv)),
                Some(sets) => {
                    let set = &sets[t];
                    let position = |level: u64| -> Result<u64> {
                        if !set.contains(&level) {
                            return Err(Error::NotInLevelSet { tower: t, level });
                        }
                        Ok(set.range(..level).count() as u64)
                    };
                    position(i)?;
                    let pu = position((i as i64 + nu) as u64)?;
                    let pv = position((i as i64 + nv) as u64)?;
                    u128::from(pu.abs_diff(pv))
                }
            };
        }
        total = &total + &(&Dyadic::new(steps, 0) * &tower.base);
    }
    Ok(total)
}

/// Height `4^n` and level measure `8^-n` of the `n`-th counterexample tower.
fn counterexample_tower(n: u32) -> (u64, Dyadic) {
    (1u64 << (2 * n), Dyadic::pow2_inv(3 * u64::from(n)))
}

/// Towers `n = 1..=n_max`; total mass `1 - 2^-n_max`.
pub fn counterexample_system(n_max: u32) -> Result<TowerSystem> {
    TowerSystem::new((1..=n_max).map(counterexample_tower))
}

/// The levels `2^n m`, `0 ≤ m < 2^n`, of tower `n`.
pub fn counterexample_levels(n: u32) -> BTreeSet<u64> {
    (0..1u64 << n).map(|m| m << n).collect()
}

/// Shifts of `U_n`: the first half of the `A_n` levels move up by `4^n/2`,
/// the second half move down by the same amount.
fn counterexample_shifts(n: u32) -> BTreeMap<u64, i64> {
    let half_height = 1i64 << (2 * n - 1);
    counterexample_levels(n)
        .into_iter()
        .enumerate()
        .map(|(m, level)| {
            let up = (m as u64) < (1u64 << (n - 1));
            (level, if up { half_height } else { -half_height })
        })
        .collect()
}

/// `U_n` on the single tower of height `4^n` with level measure `8^-n`.
pub fn counterexample_element(n: u32) -> Result<TowerElement> {
    if n == 0 || n > 31 {
        return Err(Error::InvalidTower(format!("n = {n} out of range 1..=31")));
    }
    let system = TowerSystem::new([counterexample_tower(n)])?;
    TowerElement::from_sparse(system, vec![counterexample_shifts(n)])
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleRow {
    pub n: u32,
    pub d_t: Dyadic,
    pub d_ta: Dyadic,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CounterexampleReport {
    pub rows: Vec<CounterexampleRow>,
    /// Mass left out by truncating to `n_max` towers.
    pub mass_deficit: Dyadic,
    /// Distances of the glued involution `U = ⊔ U_n` on the truncated system.
    pub glued_d_t: Dyadic,
    pub glued_d_ta: Dyadic,
}

/// Exact `d_T(U_n, id)` and `d_{T_A}(U_n, id)` for `n = 1..=n_max`, each `U_n`
/// acting on tower `n` of the truncated system.
pub fn counterexample_report(n_max: u32) -> Result<CounterexampleReport> {
    if n_max == 0 {
        return Err(Error::InvalidTower("n_max must be at least 1".into()));
    }
    let system = counterexample_system(n_max)?;
    let id = TowerElement::identity(system.clone());
    let level_sets: Vec<BTreeSet<u64>> = (1..=n_max).map(counterexample_levels).collect();
    let mut rows = Vec::new();
    let mut glued = vec![BTreeMap::new(); n_max as usize];
    for n in 1..=n_max {
        let mut shifts = vec![BTreeMap::new(); n_max as usize];
        shifts[n as usize - 1] = counterexample_shifts(n);
        glued[n as usize - 1] = shifts[n as usize - 1].clone();
        let u = TowerElement::from_sparse(system.clone(), shifts)?;
        rows.push(CounterexampleRow {
            n,
            d_t: tower_metric(&u, &id, None)?,
            d_ta: tower_metric(&u, &id, Some(&level_sets))?,
        });
    }
    let glued = TowerElement::from_sparse(system.clone(), glued)?;
    Ok(CounterexampleReport {
        rows,
        mass_deficit: system.mass_deficit(),
        glued_d_t: tower_metric(&glued, &id, None)?,
        glued_d_ta: tower_metric(&glued, &id, Some(&level_sets))?,
    })
}
