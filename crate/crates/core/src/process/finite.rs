use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{Process, ProcessError, ProcessKind, Sampling};
use crate::metric::{Metric, StatePoint};

/// A discrete-time m-semiflow on states `0..n` given by a successor
/// relation: `U(t,τ;x)` is the set reachable in exactly `t − τ` steps.
/// States are embedded as 1-D points with coordinate equal to the index.
#[derive(Clone, Debug)]
pub struct FiniteRelationProcess {
    successors: Vec<Vec<usize>>,
}

impl FiniteRelationProcess {
    pub fn new(successors: Vec<Vec<usize>>) -> Result<Self, ProcessError> {
        let n = successors.len();
        if n == 0 {
            return Err(ProcessError::InvalidArgument("relation needs at least one state".into()));
        }
        for (i, s) in successors.iter().enumerate() {
            if s.is_empty() || s.iter().any(|&j| j >= n) {
                return Err(ProcessError::InvalidArgument(format!("state {i} needs successors within 0..{n}")));
            }
        }
        Ok(Self { successors })
    }

    /// `n` states with 1 to `max_out` successors each, drawn from `seed`.
    pub fn random(n: usize, max_out: usize, seed: u64) -> Result<Self, ProcessError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let successors = (0..n)
            .map(|_| {
                let k = rng.gen_range(1..=max_out.max(1));
                let mut s: Vec<usize> = (0..k).map(|_| rng.gen_range(0..n)).collect();
                s.sort_unstable();
                s.dedup();
                s
            })
            .collect();
        Self::new(successors)
    }

    pub fn states(&self) -> usize {
        self.successors.len()
    }

    pub fn successors(&self) -> &[Vec<usize>] {
        &self.successors
    }

    /// One step of the set map on a membership mask.
    pub fn step_mask(&self, mask: &[bool]) -> Vec<bool> {
        let mut next = vec![false; mask.len()];
        for (i, _) in mask.iter().enumerate().filter(|(_, &m)| m) {
            for &j in &self.successors[i] {
                next[j] = true;
            }
        }
        next
    }

    fn state_of(&self, x: &StatePoint) -> Result<usize, ProcessError> {
        let v = x.coords()[0];
        if x.dim() != 1 || v < 0.0 || v.fract() != 0.0 || v as usize >= self.states() {
            return Err(ProcessError::OutsideDomain(format!("{x} is not a state index")));
        }
        Ok(v as usize)
    }
}

pub(crate) fn whole_steps(t: f64, tau: f64) -> Result<usize, ProcessError> {
    let n = (t - tau).round();
    if ((t - tau) - n).abs() > 1e-9 {
        return Err(ProcessError::InvalidTime(format!("discrete-time process needs integer t - tau, got {}", t - tau)));
    }
    Ok(n as usize)
}

impl Process for FiniteRelationProcess {
    fn name(&self) -> &str {
        "finite-relation"
    }

    fn kind(&self) -> ProcessKind {
        ProcessKind::Semiflow
    }

    fn is_strict(&self) -> bool {
        true
    }

    fn dimension(&self) -> usize {
        1
    }

    fn metric(&self) -> Metric {
        Metric::Euclidean
    }

    fn advance(&self, t: f64, tau: f64, x: &StatePoint, _: Sampling) -> Result<Vec<StatePoint>, ProcessError> {
        let steps = whole_steps(t, tau)?;
        let mut mask = vec![false; self.states()];
        mask[self.state_of(x)?] = true;
        for _ in 0..steps {
            mask = self.step_mask(&mask);
        }
        Ok(mask
            .iter()
            .enumerate()
            .filter(|(_, &m)| m)
            .map(|(i, _)| StatePoint::from_vec_unchecked(vec![i as f64]))
            .collect())
    }
}
