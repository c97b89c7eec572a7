use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SegmentKind {
    /// Excursion that ended by dropping below the threshold.
    Complete,
    /// Excursion cut off by the stop index.
    Truncated,
    /// Trailing K-decrease that never reached its drop.
    Incomplete,
}

/// Half-open index range `[start, start + len)` over the analyzed series.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Segment {
    pub start: usize,
    pub len: usize,
    pub kind: SegmentKind,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct Segmentation {
    pub segments: Vec<Segment>,
}

impl Segmentation {
    pub fn len(&self) -> usize {
        self.segments.len()
    }

    pub fn is_empty(&self) -> bool {
        self.segments.is_empty()
    }
}

/// Excursions of a series above the threshold `c`.
///
/// An excursion starts at the first index (at or after the previous end)
/// whose value is `>= c` and ends exclusive at the first later index whose
/// value drops below `c`. With a `stop` index, the excursion in progress
/// there is truncated (and indices `>= stop` are not scanned); without one, a
/// trailing stretch that never drops below `c` has no defined end and is not
/// emitted.
pub fn excursion_decomposition(series: &[i64], c: i64, stop: Option<usize>) -> Segmentation {
    let horizon = stop.unwrap_or(series.len()).min(series.len());
    let mut segs = Vec::new();
    let mut i = 0;
    while i < horizon {
        if series[i] < c {
            i += 1;
            continue;
        }
        let start = i;
        while i < horizon && series[i] >= c {
            i += 1;
        }
        if i < series.len() && stop.is_none_or(|s| i < s) {
            // ended by dropping below c
            segs.push(Segment { start, len: i - start, kind: SegmentKind::Complete });
        } else if stop.is_some() {
            segs.push(Segment { start, len: horizon - start, kind: SegmentKind::Truncated });
        }
        // else: trailing stretch without a defined end; dropped
    }
    Segmentation { segments: segs }
}

/// Successive K-decreases of a walk: each segment starts where the previous
/// ended and ends at the first index where the walk sits `K` or more below
/// the segment's start value (that index closes the segment). A trailing
/// segment that never completes its drop is flagged `Incomplete`.
pub fn k_decrease_decomposition(walk: &[i64], k: i64) -> Segmentation {
    let mut segs = Vec::new();
    if walk.is_empty() {
        return Segmentation { segments: segs };
    }
    let mut start = 0usize;
    let mut j = 1usize;
    while j < walk.len() {
        if walk[j] - walk[start] <= -k {
            segs.push(Segment { start, len: j - start, kind: SegmentKind::Complete });
            start = j;
        }
        j += 1;
    }
    if start + 1 < walk.len() || (segs.is_empty() && walk.len() > 1) {
        segs.push(Segment {
            start,
            len: walk.len() - 1 - start,
            kind: SegmentKind::Incomplete,
        });
    } else if walk.len() == 1 {
        segs.push(Segment { start: 0, len: 0, kind: SegmentKind::Incomplete });
    }
    Segmentation { segments: segs }
}
