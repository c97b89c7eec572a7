use super::CouplingError;
use crate::rng::UniformStream;
use std::cell::Cell;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Source {
    A,
    B,
}

/// The draws revealed so far from both streams. Policies may read these
/// freely; `peek` beyond the revealed prefix is recorded as a violation and
/// fails the whole derivation.
pub struct RevealedDraws {
    a: Vec<f64>,
    b: Vec<f64>,
    violation: Cell<bool>,
}

impl RevealedDraws {
    fn new() -> Self {
        RevealedDraws { a: Vec::new(), b: Vec::new(), violation: Cell::new(false) }
    }

    pub fn a(&self) -> &[f64] {
        &self.a
    }

    pub fn b(&self) -> &[f64] {
        &self.b
    }

    pub fn revealed(&self, s: Source) -> &[f64] {
        match s {
            Source::A => &self.a,
            Source::B => &self.b,
        }
    }

    /// Value at an absolute index of a stream. Indexing past the revealed
    /// prefix trips the ledger.
    pub fn peek(&self, s: Source, idx: usize) -> Option<f64> {
        let v = self.revealed(s);
        if idx < v.len() {
            Some(v[idx])
        } else {
            self.violation.set(true);
            None
        }
    }
}

/// Decides, from revealed draws only, which stream supplies the next draws
/// and how many of them.
pub trait SelectionPolicy {
    fn choose(&mut self, revealed: &RevealedDraws) -> (Source, usize);
}

/// Emit `n` draws by repeatedly asking the policy which stream to advance.
/// Each emitted value is the next unrevealed draw of the chosen stream.
pub fn derive_stream(
    a: &mut UniformStream,
    b: &mut UniformStream,
    policy: &mut dyn SelectionPolicy,
    n: usize,
) -> Result<Vec<f64>, CouplingError> {
    if a.seed() == b.seed() && a.stream_id() == b.stream_id() {
        return Err(CouplingError::StreamsNotDistinct);
    }
    let mut ledger = RevealedDraws::new();
    let mut out = Vec::with_capacity(n);
    while out.len() < n {
        let (src, count) = policy.choose(&ledger);
        if ledger.violation.get() {
            return Err(CouplingError::AdaptednessViolation(format!(
                "peek past revealed prefix before emit {}",
                out.len()
            )));
        }
        if count == 0 {
            return Err(CouplingError::EmptyRequest);
        }
        for _ in 0..count.min(n - out.len()) {
            let u = match src {
                Source::A => {
                    let u = a.next_f64();
                    ledger.a.push(u);
                    u
                }
                Source::B => {
                    let u = b.next_f64();
                    ledger.b.push(u);
                    u
                }
            };
            out.push(u);
        }
    }
    Ok(out)
}

/// Always the same stream.
pub struct ConstantPolicy(pub Source);

impl SelectionPolicy for ConstantPolicy {
    fn choose(&mut self, _revealed: &RevealedDraws) -> (Source, usize) {
        (self.0, 1)
    }
}

/// Deterministic interleave A, B, A, B, ...
#[derive(Default)]
pub struct AlternatePolicy {
    next_b: bool,
}

impl SelectionPolicy for AlternatePolicy {
    fn choose(&mut self, _revealed: &RevealedDraws) -> (Source, usize) {
        let s = if self.next_b { Source::B } else { Source::A };
        self.next_b = !self.next_b;
        (s, 1)
    }
}

/// Use B for exactly one draw right after any A-draw above the threshold.
pub struct AfterHighPolicy {
    threshold: f64,
    just_b: bool,
}

impl AfterHighPolicy {
    pub fn new(threshold: f64) -> Self {
        AfterHighPolicy { threshold, just_b: false }
    }
}

impl SelectionPolicy for AfterHighPolicy {
    fn choose(&mut self, revealed: &RevealedDraws) -> (Source, usize) {
        if !self.just_b && revealed.a().last().is_some_and(|&u| u > self.threshold) {
            self.just_b = true;
            (Source::B, 1)
        } else {
            self.just_b = false;
            (Source::A, 1)
        }
    }
}

/// Stream chosen by the parity of the count of revealed draws above 1/2;
/// block length grows with the last draw of the previously chosen stream.
/// The running count is cached incrementally, so each call costs only the
/// draws revealed since the last one.
#[derive(Default)]
pub struct ParityPolicy {
    seen_a: usize,
    seen_b: usize,
    highs: usize,
    last_source: Option<Source>,
}

impl SelectionPolicy for ParityPolicy {
    fn choose(&mut self, revealed: &RevealedDraws) -> (Source, usize) {
        for &u in &revealed.a()[self.seen_a..] {
            self.highs += (u > 0.5) as usize;
        }
        for &u in &revealed.b()[self.seen_b..] {
            self.highs += (u > 0.5) as usize;
        }
        self.seen_a = revealed.a().len();
        self.seen_b = revealed.b().len();
        let last = match self.last_source {
            Some(Source::A) => revealed.a().last().copied(),
            Some(Source::B) => revealed.b().last().copied(),
            None => None,
        }
        .unwrap_or(0.5);
        let block = 1 + (last * 3.0) as usize;
        let src = if self.highs.is_multiple_of(2) { Source::A } else { Source::B };
        self.last_source = Some(src);
        (src, block)
    }
}

/// Deliberately broken policy that inspects a future draw; used to test that
/// the ledger rejects it.
pub struct PeekingPolicy;

impl SelectionPolicy for PeekingPolicy {
    fn choose(&mut self, revealed: &RevealedDraws) -> (Source, usize) {
        // look one past the revealed prefix of A
        let ahead = revealed.peek(Source::A, revealed.a().len());
        match ahead {
            Some(u) if u > 0.5 => (Source::B, 1),
            _ => (Source::A, 1),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constant_policy_reproduces_stream_a() {
        let mut a = UniformStream::new(5, 1);
        let mut b = UniformStream::new(5, 2);
        let out =
            derive_stream(&mut a, &mut b, &mut ConstantPolicy(Source::A), 500).unwrap();
        let mut fresh = UniformStream::new(5, 1);
        let expect: Vec<f64> = (0..500).map(|_| fresh.next_f64()).collect();
        assert_eq!(out, expect);
    }

    #[test]
    fn alternate_policy_interleaves() {
        let mut a = UniformStream::new(5, 1);
        let mut b = UniformStream::new(5, 2);
        let out = derive_stream(&mut a, &mut b, &mut AlternatePolicy::default(), 100).unwrap();
        let mut fa = UniformStream::new(5, 1);
        let mut fb = UniformStream::new(5, 2);
        for (i, &u) in out.iter().enumerate() {
            let expect = if i % 2 == 0 { fa.next_f64() } else { fb.next_f64() };
            assert_eq!(u, expect);
        }
    }

    #[test]
    fn identical_streams_rejected() {
        let mut a = UniformStream::new(5, 1);
        let mut b = UniformStream::new(5, 1);
        assert!(matches!(
            derive_stream(&mut a, &mut b, &mut ConstantPolicy(Source::A), 10),
            Err(CouplingError::StreamsNotDistinct)
        ));
    }

    #[test]
    fn peeking_policy_is_rejected() {
        let mut a = UniformStream::new(5, 1);
        let mut b = UniformStream::new(5, 2);
        assert!(matches!(
            derive_stream(&mut a, &mut b, &mut PeekingPolicy, 10),
            Err(CouplingError::AdaptednessViolation(_))
        ));
    }

    #[test]
    fn derived_draws_stay_uniform() {
        let mut a = UniformStream::new(99, 1);
        let mut b = UniformStream::new(99, 2);
        let out =
            derive_stream(&mut a, &mut b, &mut AfterHighPolicy::new(0.5), 100_000)
                .unwrap();
        let rep = crate::stats::uniformity_tests(&out, 100).unwrap();
        assert!(rep.p_value > 0.001, "p = {}", rep.p_value);
        assert!(rep.lag1_autocorr.abs() < 0.02);
    }
}
