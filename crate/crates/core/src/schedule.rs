use crate::basis::BasisPair;
use crate::error::{GfdError, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct Segment {
    pub start_k: usize,
    pub pair: BasisPair,
}

/// Assignment of basis pairs to harmonic ranges. Segment `i` covers
/// `start_k(i) ..< start_k(i + 1)`; the last one is open-ended.
#[derive(Debug, Clone, PartialEq)]
pub struct BasisSchedule {
    segments: Vec<Segment>,
}

impl BasisSchedule {
    pub fn new(segments: Vec<Segment>) -> Result<Self> {
        match segments.first() {
            None => return Err(GfdError::Config("schedule has no segments".into())),
            Some(s) if s.start_k != 1 => {
                return Err(GfdError::Config(format!(
                    "first schedule segment must start at k = 1, got {}",
                    s.start_k
                )))
            }
            _ => {}
        }
        if let Some(w) = segments.windows(2).find(|w| w[1].start_k <= w[0].start_k) {
            return Err(GfdError::Config(format!(
                "schedule start indices must increase strictly ({} then {})",
                w[0].start_k, w[1].start_k
            )));
        }
        Ok(Self { segments })
    }

    pub fn single(pair: BasisPair) -> Self {
        Self {
            segments: vec![Segment { start_k: 1, pair }],
        }
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// Index of the segment active at harmonic `k >= 1`.
    pub fn segment_index(&self, k: usize) -> usize {
        self.segments.partition_point(|s| s.start_k <= k).saturating_sub(1)
    }

    pub fn pair_for(&self, k: usize) -> &BasisPair {
        &self.segments[self.segment_index(k)].pair
    }
}
