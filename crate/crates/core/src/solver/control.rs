use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Which operators are active at each iteration.
#[derive(Debug, Clone, PartialEq)]
pub enum ControlMode {
    /// Every operator at every iteration.
    FullParallel,
    /// Sweep through the blocks in order, one block per iteration.
    CyclicBlocks(Vec<Vec<usize>>),
    /// An arbitrary finite sequence of active sets, repeated forever.
    Periodic(Vec<Vec<usize>>),
}

/// A control mode plus the window length `M` within which every operator
/// must be activated at least once.
#[derive(Debug, Clone, PartialEq)]
pub struct ControlPolicy {
    pub mode: ControlMode,
    pub m: usize,
}

impl ControlPolicy {
    pub fn full_parallel() -> Self {
        Self {
            mode: ControlMode::FullParallel,
            m: 1,
        }
    }

    /// Cyclic sweep; `M` equals the number of blocks.
    pub fn cyclic_blocks(blocks: Vec<Vec<usize>>) -> Self {
        let m = blocks.len();
        Self {
            mode: ControlMode::CyclicBlocks(blocks),
            m,
        }
    }

    /// Splits `ids` into consecutive blocks of `size`.
    pub fn consecutive_blocks(ids: &[usize], size: usize) -> Self {
        Self::cyclic_blocks(ids.chunks(size.max(1)).map(<[usize]>::to_vec).collect())
    }

    pub fn periodic(sets: Vec<Vec<usize>>, m: usize) -> Self {
        Self {
            mode: ControlMode::Periodic(sets),
            m,
        }
    }

    /// Length of one full sweep of the schedule.
    pub fn period(&self) -> usize {
        match &self.mode {
            ControlMode::FullParallel => 1,
            ControlMode::CyclicBlocks(s) | ControlMode::Periodic(s) => s.len().max(1),
        }
    }

    /// `I_n`, in schedule order.
    pub fn active_set(&self, n: usize, all_ids: &[usize]) -> Vec<usize> {
        match &self.mode {
            ControlMode::FullParallel => all_ids.to_vec(),
            ControlMode::CyclicBlocks(s) | ControlMode::Periodic(s) => s[n % s.len()].clone(),
        }
    }
}

impl fmt::Display for ControlPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.mode {
            ControlMode::FullParallel => write!(f, "full_parallel"),
            ControlMode::CyclicBlocks(b) => {
                write!(f, "cyclic_blocks({} blocks, M={})", b.len(), self.m)
            }
            ControlMode::Periodic(s) => write!(f, "periodic({} sets, M={})", s.len(), self.m),
        }
    }
}

/// Checks that every window of `M` consecutive iterations activates every
/// id. Periodic schedules are checked over one full period of windows.
pub fn validate_control(policy: &ControlPolicy, ids: &BTreeSet<usize>) -> Result<()> {
    if policy.m == 0 {
        return Err(crate::error::invalid("M", "must be at least 1"));
    }
    let sets = match &policy.mode {
        ControlMode::FullParallel => {
            if ids.is_empty() {
                return Err(Error::EmptyBlock(0));
            }
            return Ok(());
        }
        ControlMode::CyclicBlocks(s) | ControlMode::Periodic(s) => s,
    };
    if sets.is_empty() {
        return Err(Error::EmptyBlock(0));
    }
    for (n, set) in sets.iter().enumerate() {
        if set.is_empty() {
            return Err(Error::EmptyBlock(n));
        }
        if let Some(&bad) = set.iter().find(|i| !ids.contains(i)) {
            return Err(Error::UnknownId(bad));
        }
    }
    let p = sets.len();
    for start in 0..p {
        let covered: BTreeSet<usize> = (0..policy.m)
            .flat_map(|k| sets[(start + k) % p].iter().copied())
            .collect();
        if let Some(&missing) = ids.iter().find(|i| !covered.contains(i)) {
            return Err(Error::ControlCoverage {
                id: missing,
                window_start: start,
                m: policy.m,
            });
        }
    }
    Ok(())
}

pub type WeightFn = Arc<dyn Fn(usize, &[usize]) -> Vec<f64> + Send + Sync>;

/// `omega_{i,n}` for the active set.
#[derive(Clone)]
pub enum WeightPolicy {
    /// `1 / card(I_n)`.
    Uniform,
    /// A constant weight per id.
    Fixed(std::collections::BTreeMap<usize, f64>),
    /// `(n, I_n) -> weights`, aligned with `I_n`.
    Custom(WeightFn),
}

impl fmt::Debug for WeightPolicy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            WeightPolicy::Uniform => write!(f, "Uniform"),
            WeightPolicy::Fixed(m) => f.debug_tuple("Fixed").field(m).finish(),
            WeightPolicy::Custom(_) => write!(f, "Custom"),
        }
    }
}

impl WeightPolicy {
    pub fn weights(&self, n: usize, active: &[usize]) -> Result<Vec<f64>> {
        match self {
            WeightPolicy::Uniform => {
                let w = 1.0 / active.len() as f64;
                Ok(vec![w; active.len()])
            }
            WeightPolicy::Fixed(map) => active
                .iter()
                .map(|id| {
                    map.get(id).copied().ok_or_else(|| Error::Weights {
                        iteration: n,
                        reason: format!("no weight for id {id}"),
                    })
                })
                .collect(),
            WeightPolicy::Custom(f) => Ok(f(n, active)),
        }
    }
}

/// Weight condition: each weight in `[eps, 1]`, sum equal to one.
pub fn check_weights(n: usize, weights: &[f64], active: usize, eps: f64) -> Result<()> {
    let fail = |reason: String| {
        Err(Error::Weights {
            iteration: n,
            reason,
        })
    };
    if weights.len() != active {
        return fail(format!(
            "{} weights for {active} active operators",
            weights.len()
        ));
    }
    if let Some(w) = weights.iter().find(|&&w| !(w >= eps && w <= 1.0)) {
        return fail(format!("weight {w} outside [{eps}, 1]"));
    }
    let sum: f64 = weights.iter().sum();
    if (sum - 1.0).abs() > 1e-12 {
        return fail(format!("weights sum to {sum}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ids(n: usize) -> BTreeSet<usize> {
        (0..n).collect()
    }

    #[test]
    fn full_parallel_always_covers() {
        for m in 1..4 {
            let p = ControlPolicy {
                mode: ControlMode::FullParallel,
                m,
            };
            assert!(validate_control(&p, &ids(5)).is_ok());
        }
    }

    #[test]
    fn twelve_blocks_of_hundred() {
        let all: Vec<usize> = (1..=1200).collect();
        let p = ControlPolicy::consecutive_blocks(&all, 100);
        assert_eq!(p.m, 12);
        assert_eq!(p.period(), 12);
        assert!(validate_control(&p, &all.iter().copied().collect()).is_ok());
        assert_eq!(p.active_set(13, &all), (101..=200).collect::<Vec<_>>());
    }

    #[test]
    fn missing_id_is_named() {
        let p = ControlPolicy::cyclic_blocks(vec![vec![0, 1], vec![2]]);
        let err = validate_control(&p, &ids(4)).unwrap_err();
        assert!(matches!(err, Error::ControlCoverage { id: 3, .. }), "{err}");
    }

    #[test]
    fn short_window_fails() {
        let mut p = ControlPolicy::cyclic_blocks(vec![vec![0], vec![1], vec![2]]);
        p.m = 2;
        let err = validate_control(&p, &ids(3)).unwrap_err();
        assert!(matches!(
            err,
            Error::ControlCoverage {
                id: 2,
                window_start: 0,
                m: 2
            }
        ));
    }

    #[test]
    fn periodic_windows_wrap() {
        // sets: {0}, {1}, {0,2}; every window of 3 wraps around the period
        let p = ControlPolicy::periodic(vec![vec![0], vec![1], vec![0, 2]], 3);
        assert!(validate_control(&p, &ids(3)).is_ok());
        let p = ControlPolicy::periodic(vec![vec![0], vec![1], vec![0, 2]], 2);
        assert!(validate_control(&p, &ids(3)).is_err());
    }

    #[test]
    fn empty_and_unknown_sets() {
        let p = ControlPolicy::cyclic_blocks(vec![vec![0], vec![]]);
        assert_eq!(
            validate_control(&p, &ids(1)).unwrap_err(),
            Error::EmptyBlock(1)
        );
        let p = ControlPolicy::cyclic_blocks(vec![vec![0, 9]]);
        assert_eq!(
            validate_control(&p, &ids(1)).unwrap_err(),
            Error::UnknownId(9)
        );
    }

    #[test]
    fn weight_checks() {
        assert!(check_weights(0, &[0.5, 0.5], 2, 0.01).is_ok());
        assert!(check_weights(0, &[0.6, 0.5], 2, 0.01).is_err());
        assert!(check_weights(0, &[0.995, 0.005], 2, 0.01).is_err());
        assert!(check_weights(0, &[1.0], 2, 0.01).is_err());
        let thirds = WeightPolicy::Uniform.weights(0, &[1, 2, 3]).unwrap();
        assert!(check_weights(0, &thirds, 3, 0.01).is_ok());
        let fixed = WeightPolicy::Fixed([(1, 0.25), (2, 0.75)].into_iter().collect());
        assert_eq!(fixed.weights(0, &[2, 1]).unwrap(), vec![0.75, 0.25]);
        assert!(fixed.weights(0, &[3]).is_err());
    }
}
