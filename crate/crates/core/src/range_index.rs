//! Stabbing queries over a fixed set of symbol ranges by binary search on a
//! sorted breakpoint array.
//!
//! The breakpoints are every upper bound `hi` and the predecessor `lo - 1`
//! of every lower bound. Membership is constant on each half-open interval
//! `(P[i-1], P[i]]`, so the ranges containing `x` are exactly those
//! containing the smallest breakpoint `>= x`.

use crate::types::{RangeLabel, Symbol};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RangeIndex {
    ranges: Vec<RangeLabel>,
    /// Strictly ascending code points. May include surrogate codes.
    points: Vec<u32>,
    /// `hits[i]` lists the ranges containing `points[i]`, ascending.
    hits: Vec<Vec<usize>>,
}

impl RangeIndex {
    pub fn build(ranges: &[RangeLabel]) -> Self {
        let mut points: Vec<u32> = ranges
            .iter()
            .flat_map(|r| {
                let lo = r.lo().code();
                (lo > 0).then(|| lo - 1).into_iter().chain([r.hi().code()])
            })
            .collect();
        points.sort_unstable();
        points.dedup();

        // Sweep: ranges sorted by lo enter as the breakpoint passes lo, and
        // are filtered out once the breakpoint passes hi.
        let mut order: Vec<usize> = (0..ranges.len()).collect();
        order.sort_by_key(|&i| ranges[i].lo());
        let mut next = 0;
        let mut active: Vec<usize> = Vec::new();
        let mut hits = Vec::with_capacity(points.len());
        for &p in &points {
            while next < order.len() && ranges[order[next]].lo().code() <= p {
                active.push(order[next]);
                next += 1;
            }
            active.retain(|&i| ranges[i].hi().code() >= p);
            let mut here = active.clone();
            here.sort_unstable();
            hits.push(here);
        }
        RangeIndex {
            ranges: ranges.to_vec(),
            points,
            hits,
        }
    }

    pub fn ranges(&self) -> &[RangeLabel] {
        &self.ranges
    }

    pub fn breakpoints(&self) -> &[u32] {
        &self.points
    }

    pub fn hits_at(&self, i: usize) -> &[usize] {
        &self.hits[i]
    }

    /// Ids of all ranges containing `x`, ascending.
    pub fn lookup(&self, x: Symbol) -> &[usize] {
        let i = self.points.partition_point(|&p| p < x.code());
        self.hits.get(i).map_or(&[], Vec::as_slice)
    }

    /// Like [`lookup`](Self::lookup), also returning how many breakpoints
    /// were compared.
    pub fn lookup_counted(&self, x: Symbol) -> (&[usize], usize) {
        let mut probes = 0;
        let i = self.points.partition_point(|&p| {
            probes += 1;
            p < x.code()
        });
        (self.hits.get(i).map_or(&[], Vec::as_slice), probes)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn sym(c: u32) -> Symbol {
        Symbol::from_code(c).unwrap()
    }

    fn r(lo: u32, hi: u32) -> RangeLabel {
        RangeLabel::new(sym(lo), sym(hi)).unwrap()
    }

    fn brute(ranges: &[RangeLabel], x: Symbol) -> Vec<usize> {
        (0..ranges.len())
            .filter(|&i| ranges[i].contains(x))
            .collect()
    }

    #[test]
    fn two_overlapping_ranges() {
        let idx = RangeIndex::build(&[r(1, 50), r(20, 80)]);
        assert_eq!(idx.breakpoints(), &[0, 19, 50, 80]);
        let expect: [&[usize]; 4] = [&[], &[0], &[0, 1], &[1]];
        for (i, e) in expect.iter().enumerate() {
            assert_eq!(idx.hits_at(i), *e);
        }
        assert_eq!(idx.lookup(sym(25)), &[0, 1]);
        assert_eq!(idx.lookup(sym(0)), &[] as &[usize]);
        assert_eq!(idx.lookup(sym(81)), &[] as &[usize]);
    }

    #[test]
    fn singleton_and_zero_based() {
        let a = 'a' as u32;
        let idx = RangeIndex::build(&[RangeLabel::single('a')]);
        assert_eq!(idx.breakpoints(), &[a - 1, a]);
        assert_eq!(idx.hits_at(0), &[] as &[usize]);
        assert_eq!(idx.hits_at(1), &[0]);

        let idx = RangeIndex::build(&[r(0, 5)]);
        assert_eq!(idx.breakpoints(), &[5]);
        assert_eq!(idx.hits_at(0), &[0]);
        for x in 0..=6 {
            assert_eq!(idx.lookup(sym(x)), brute(idx.ranges(), sym(x)).as_slice());
        }
    }

    #[test]
    fn empty_index() {
        let idx = RangeIndex::build(&[]);
        assert_eq!(idx.lookup(sym(3)), &[] as &[usize]);
    }

    #[test]
    fn lookup_is_logarithmic() {
        let ranges: Vec<_> = (0..256).map(|i| r(i * 4 + 1, i * 4 + 2)).collect();
        let idx = RangeIndex::build(&ranges);
        let bound = (idx.breakpoints().len() as f64).log2().ceil() as usize + 1;
        for x in 0..1100 {
            let (hits, probes) = idx.lookup_counted(sym(x));
            assert_eq!(hits, brute(&ranges, sym(x)).as_slice());
            assert!(probes <= bound, "{probes} probes for {x}");
        }
    }

    fn arb_ranges() -> impl Strategy<Value = Vec<RangeLabel>> {
        proptest::collection::vec((0u32..=300, 0u32..=300), 1..=20)
            .prop_map(|v| v.into_iter().map(|(a, b)| r(a.min(b), a.max(b))).collect())
    }

    proptest! {
        #[test]
        fn lookup_matches_brute_force(ranges in arb_ranges()) {
            let idx = RangeIndex::build(&ranges);
            prop_assert!(idx.breakpoints().windows(2).all(|w| w[0] < w[1]));
            prop_assert!(idx.breakpoints().len() <= 2 * ranges.len());
            for x in 0..=300 {
                let expect = brute(&ranges, sym(x));
                prop_assert_eq!(idx.lookup(sym(x)), expect.as_slice());
            }
        }
    }
}
