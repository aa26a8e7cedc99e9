//! Labelling of sample streams by nearest state and the resulting dwell times
//! and transition counts.

use num_complex::Complex64 as C64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum StateLabel {
    State(usize),
    Transit,
}

impl StateLabel {
    /// Index used in sample dumps: the state index, or -1 for transit.
    pub fn code(&self) -> i64 {
        match self {
            StateLabel::State(k) => *k as i64,
            StateLabel::Transit => -1,
        }
    }
}

/// Nearest state strictly within `capture_radius`, else transit.
pub fn label_samples(samples: &[C64], states: &[C64], capture_radius: f64) -> Vec<StateLabel> {
    samples.iter().map(|a| label_one(*a, states, capture_radius)).collect()
}

fn label_one(a: C64, states: &[C64], capture_radius: f64) -> StateLabel {
    let mut best = None;
    let mut best_d = capture_radius;
    for (k, s) in states.iter().enumerate() {
        let d = (a - s).norm();
        if d < best_d {
            best_d = d;
            best = Some(k);
        }
    }
    best.map_or(StateLabel::Transit, StateLabel::State)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SwitchingStats {
    /// `transitions[i][j]` counts departures from state i whose next labelled
    /// state is j ≠ i.
    pub transitions: Vec<Vec<u64>>,
    /// Durations of contiguous residence in each state.
    pub dwell_times: Vec<Vec<f64>>,
    pub transit_samples: u64,
}

impl SwitchingStats {
    pub fn new(n_states: usize) -> Self {
        SwitchingStats {
            transitions: vec![vec![0; n_states]; n_states],
            dwell_times: vec![Vec::new(); n_states],
            transit_samples: 0,
        }
    }

    pub fn n_states(&self) -> usize {
        self.dwell_times.len()
    }

    pub fn departures(&self, state: usize) -> u64 {
        self.transitions[state].iter().sum()
    }

    pub fn total_transitions(&self) -> u64 {
        (0..self.n_states()).map(|k| self.departures(k)).sum()
    }

    /// Whether every state was both entered and left at least once.
    pub fn all_states_switch(&self) -> bool {
        (0..self.n_states()).all(|k| {
            let entered: u64 = self.transitions.iter().map(|row| row[k]).sum();
            entered > 0 && self.departures(k) > 0
        })
    }

    pub fn merge(&mut self, other: &SwitchingStats) {
        assert_eq!(self.n_states(), other.n_states(), "state sets differ");
        for (row, orow) in self.transitions.iter_mut().zip(&other.transitions) {
            for (c, o) in row.iter_mut().zip(orow) {
                *c += o;
            }
        }
        for (d, o) in self.dwell_times.iter_mut().zip(&other.dwell_times) {
            d.extend_from_slice(o);
        }
        self.transit_samples += other.transit_samples;
    }
}

/// Statistics of one sample stream spaced `dt` apart.
pub fn switching_statistics(stream: &[C64], dt: f64, states: &[C64], capture_radius: f64) -> SwitchingStats {
    let mut stats = SwitchingStats::new(states.len());
    let mut last_state: Option<usize> = None;
    let mut run: Option<(usize, usize)> = None;
    for label in label_samples(stream, states, capture_radius) {
        match label {
            StateLabel::Transit => {
                stats.transit_samples += 1;
                if let Some((k, len)) = run.take() {
                    stats.dwell_times[k].push(len as f64 * dt);
                }
            }
            StateLabel::State(k) => {
                run = match run {
                    Some((j, len)) if j == k => Some((k, len + 1)),
                    Some((j, len)) => {
                        stats.dwell_times[j].push(len as f64 * dt);
                        Some((k, 1))
                    }
                    None => Some((k, 1)),
                };
                if let Some(prev) = last_state {
                    if prev != k {
                        stats.transitions[prev][k] += 1;
                    }
                }
                last_state = Some(k);
            }
        }
    }
    if let Some((k, len)) = run {
        stats.dwell_times[k].push(len as f64 * dt);
    }
    stats
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn resting_stream_has_one_dwell() {
        let states = [c(0.0, 0.0), c(1.0, 0.0)];
        let s = switching_statistics(&[c(1.0, 0.0); 50], 0.1, &states, 0.2);
        assert_eq!(s.dwell_times[1].len(), 1);
        assert!((s.dwell_times[1][0] - 5.0).abs() < 1e-12);
        assert!(s.dwell_times[0].is_empty());
        assert_eq!(s.total_transitions(), 0);
    }

    #[test]
    fn zero_radius_is_all_transit() {
        let states = [c(0.0, 0.0), c(1.0, 0.0)];
        let stream = [c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)];
        let s = switching_statistics(&stream, 1.0, &states, 0.0);
        assert_eq!(s.transit_samples, 3);
        assert_eq!(s.total_transitions(), 0);
    }

    #[test]
    fn transit_interludes_are_skipped() {
        let states = [c(0.0, 0.0), c(1.0, 0.0), c(-1.0, 0.0)];
        let stream = [
            c(0.0, 0.0),
            c(0.5, 0.0),
            c(1.0, 0.0),
            c(1.0, 0.0),
            c(0.5, 0.0),
            c(1.0, 0.0),
            c(-1.0, 0.0),
        ];
        let s = switching_statistics(&stream, 1.0, &states, 0.3);
        assert_eq!(s.transitions[0][1], 1);
        assert_eq!(s.transitions[1][2], 1);
        assert_eq!(s.total_transitions(), 2);
        assert_eq!(s.dwell_times[1], vec![2.0, 1.0]);
        assert_eq!(s.transit_samples, 2);
        for k in 0..3 {
            assert_eq!(s.departures(k), s.transitions[k].iter().sum::<u64>());
        }
    }

    #[test]
    fn merge_adds() {
        let states = [c(0.0, 0.0), c(1.0, 0.0)];
        let a = switching_statistics(&[c(0.0, 0.0), c(1.0, 0.0)], 1.0, &states, 0.3);
        let mut m = a.clone();
        m.merge(&a);
        assert_eq!(m.transitions[0][1], 2);
        assert_eq!(m.dwell_times[0].len(), 2);
    }
}
