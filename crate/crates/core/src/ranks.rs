//! Global event ordering with per-event at-risk stage counts.
//!
//! Every rank-based statistic (profile likelihood, Nelson-Aalen jump factors,
//! the `z` process drift) depends on the data only through this reduction.

use crate::data::DataMatrix;
use crate::error::{Error, Result};

/// How coinciding observation values are handled.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum TiePolicy {
    /// Any tie is an error.
    #[default]
    Reject,
    /// Tied events all use the risk set just before the common time,
    /// `N_k(t-) = #{l : X_k^(l) < t}`.
    SharedRiskSet,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Event {
    pub time: f64,
    /// Zero-based system index.
    pub system: usize,
    /// Zero-based stage: the event is the `stage + 1`-th failure of its system.
    pub stage: usize,
}

/// Events sorted by time, each carrying the number of systems in every stage
/// just before it (`counts[j] = #{k : N_k(t-) = j}` for `j < r`).
#[derive(Clone, Debug)]
pub struct RankStructure {
    m: usize,
    r: usize,
    events: Vec<Event>,
    counts: Vec<u32>,
    has_ties: bool,
}

impl RankStructure {
    pub fn new(data: &DataMatrix) -> Result<Self> {
        Self::with_policy(data, TiePolicy::Reject)
    }

    pub fn with_policy(data: &DataMatrix, policy: TiePolicy) -> Result<Self> {
        let (m, r) = (data.m(), data.r());
        let mut order: Vec<usize> = (0..m * r).collect();
        let values = data.values();
        order.sort_unstable_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

        let mut has_ties = false;
        for w in order.windows(2) {
            if values[w[0]] == values[w[1]] {
                if policy == TiePolicy::Reject {
                    return Err(Error::Tie {
                        value: values[w[0]],
                        first: (w[0] / r, w[0] % r),
                        second: (w[1] / r, w[1] % r),
                    });
                }
                has_ties = true;
            }
        }

        let events: Vec<Event> = order
            .iter()
            .map(|&k| Event {
                time: values[k],
                system: k / r,
                stage: k % r,
            })
            .collect();

        let mut current = vec![0u32; r];
        current[0] = m as u32;
        let mut counts = Vec::with_capacity(events.len() * r);
        let mut start = 0;
        while start < events.len() {
            let mut end = start + 1;
            if has_ties {
                while end < events.len() && events[end].time == events[start].time {
                    end += 1;
                }
            }
            for _ in start..end {
                counts.extend_from_slice(&current);
            }
            for e in &events[start..end] {
                current[e.stage] -= 1;
                if e.stage + 1 < r {
                    current[e.stage + 1] += 1;
                }
            }
            start = end;
        }

        Ok(Self {
            m,
            r,
            events,
            counts,
            has_ties,
        })
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn r(&self) -> usize {
        self.r
    }

    pub fn len(&self) -> usize {
        self.events.len()
    }

    pub fn is_empty(&self) -> bool {
        self.events.is_empty()
    }

    pub fn events(&self) -> &[Event] {
        &self.events
    }

    pub fn has_ties(&self) -> bool {
        self.has_ties
    }

    /// At-risk stage counts just before event `e`.
    pub fn counts(&self, e: usize) -> &[u32] {
        &self.counts[e * self.r..(e + 1) * self.r]
    }

    /// Total stage rate of the risk set before event `e`: `sum_j c_j gamma_j`.
    pub fn risk(&self, e: usize, gamma: &[f64]) -> f64 {
        self.counts(e)
            .iter()
            .zip(gamma)
            .map(|(&c, &g)| c as f64 * g)
            .sum()
    }

    /// Total stage rate of the risk set just after event `e` (zero once every
    /// system has recorded its `r` failures).
    pub fn risk_after(&self, e: usize, gamma: &[f64]) -> f64 {
        if e + 1 < self.len() && !(self.has_ties && self.events[e + 1].time == self.events[e].time)
        {
            return self.risk(e + 1, gamma);
        }
        // End of a tie group or of the data: recount from the group's end.
        let t = self.events[e].time;
        let next = self.events[e + 1..]
            .iter()
            .position(|ev| ev.time > t)
            .map(|p| e + 1 + p);
        match next {
            Some(k) => self.risk(k, gamma),
            None => 0.0,
        }
    }
}

/// Equality of the ordering structure; event times are ignored.
impl PartialEq for RankStructure {
    fn eq(&self, other: &Self) -> bool {
        self.m == other.m
            && self.r == other.r
            && self.counts == other.counts
            && self
                .events
                .iter()
                .zip(&other.events)
                .all(|(a, b)| a.system == b.system && a.stage == b.stage)
    }
}
