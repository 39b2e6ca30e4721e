use serde::{Deserialize, Serialize};

/// Count, mean and centered second moment; merges pairwise without
/// cancellation (Chan et al.).
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, v: f64) {
        self.count += 1;
        let d = v - self.mean;
        self.mean += d / self.count as f64;
        self.m2 += d * (v - self.mean);
    }

    pub fn merge(&self, o: &Moments) -> Moments {
        if self.count == 0 {
            return *o;
        }
        if o.count == 0 {
            return *self;
        }
        let n = self.count + o.count;
        let d = o.mean - self.mean;
        let w = o.count as f64 / n as f64;
        Moments { count: n, mean: self.mean + d * w, m2: self.m2 + o.m2 + d * d * self.count as f64 * w }
    }

    /// Sample standard deviation (n − 1 denominator); 0 below two samples.
    pub fn std(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        (self.m2.max(0.0) / (self.count - 1) as f64).sqrt()
    }

    fn fold(blocks: &[Moments]) -> Moments {
        blocks.iter().fold(Moments::default(), |a, b| a.merge(b))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct McEstimate {
    pub mean: f64,
    /// Sample standard deviation over √trials.
    pub std_err: f64,
    pub trials: u64,
    pub seed: u64,
    /// Sample std kept growing as trials were added.
    pub heavy_tail: bool,
}

impl McEstimate {
    /// Combines per-block moments in block order, so the result does not
    /// depend on how blocks were scheduled.
    pub fn from_blocks(blocks: &[Moments], seed: u64) -> McEstimate {
        let all = Moments::fold(blocks);
        let std_err = if all.count == 0 { 0.0 } else { all.std() / (all.count as f64).sqrt() };
        McEstimate { mean: all.mean, std_err, trials: all.count, seed, heavy_tail: heavy_tail(blocks) }
    }

    pub fn constant(v: f64, trials: u64, seed: u64) -> McEstimate {
        McEstimate { mean: v, std_err: 0.0, trials, seed, heavy_tail: false }
    }
}

/// True when the sample std over the first quarter, half and all of the
/// blocks grows by more than half at each doubling. With finite variance
/// these three agree up to noise.
fn heavy_tail(blocks: &[Moments]) -> bool {
    if blocks.len() < 4 {
        return false;
    }
    let q = Moments::fold(&blocks[..blocks.len() / 4]).std();
    let h = Moments::fold(&blocks[..blocks.len() / 2]).std();
    let f = Moments::fold(blocks).std();
    q > 0.0 && h > 1.5 * q && f > 1.5 * h
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn merge_matches_a_single_pass() {
        let xs: Vec<f64> = (0..100).map(|i| ((i * 37) % 11) as f64 - 3.5).collect();
        let mut one = Moments::default();
        xs.iter().for_each(|&v| one.push(v));
        let mut a = Moments::default();
        let mut b = Moments::default();
        xs[..33].iter().for_each(|&v| a.push(v));
        xs[33..].iter().for_each(|&v| b.push(v));
        let m = a.merge(&b);
        assert_eq!(m.count, 100);
        assert!((m.mean - one.mean).abs() < 1e-13);
        assert!((m.m2 - one.m2).abs() < 1e-10);
    }

    #[test]
    fn std_err_is_std_over_root_n() {
        let mut m = Moments::default();
        for v in [1.0, 2.0, 3.0, 4.0] {
            m.push(v);
        }
        let e = McEstimate::from_blocks(&[m], 0);
        let std = (5.0f64 / 3.0).sqrt();
        assert!((e.std_err - std / 2.0).abs() < 1e-15);
    }

    #[test]
    fn growing_spread_is_flagged() {
        // each block is ten times wider than the previous
        let blocks: Vec<Moments> = (0..8)
            .map(|b| {
                let mut m = Moments::default();
                let w = 10f64.powi(b);
                for v in [-w, w, -w, w] {
                    m.push(v);
                }
                m
            })
            .collect();
        assert!(McEstimate::from_blocks(&blocks, 0).heavy_tail);
        let flat: Vec<Moments> = (0..8)
            .map(|_| {
                let mut m = Moments::default();
                for v in [-1.0, 1.0, -1.0, 1.0] {
                    m.push(v);
                }
                m
            })
            .collect();
        assert!(!McEstimate::from_blocks(&flat, 0).heavy_tail);
    }
}
