//! Deck-group utilities: orbit balls, point reduction, covering radius.
//!
//! The deck group acts on the half-plane; everything here is breadth-first
//! search over reduced words with metric pruning, deduplicated by the
//! (sign-canonical) matrices themselves. Balls are the backbone of crossing
//! searches, simplicity tests, and geodesic enumeration, and every consumer
//! is expected to validate its radius by a saturation check in tests.

use crate::hyp2::{MoebiusMap, PointH2};
use crate::words::Word;
use std::collections::HashMap;

/// One deck transformation reached by the ball search.
#[derive(Clone, Debug)]
pub struct BallElt {
    pub word: Word,
    pub mat: MoebiusMap,
    /// Displacement `d(o, w o)` of the basepoint.
    pub disp: f64,
}

/// All deck transformations `w` with `d(o, w o) <= radius`, sorted by
/// displacement (identity first).
#[derive(Clone, Debug, Default)]
pub struct Ball {
    pub radius: f64,
    pub elements: Vec<BallElt>,
}

/// Matrix-keyed set for deduplicating group elements met along different
/// word paths. Keys quantize the first two entries; candidates in the nine
/// neighboring buckets are compared entrywise at tolerance.
struct MatSet {
    buckets: HashMap<(i64, i64), Vec<MoebiusMap>>,
    quantum: f64,
    tol: f64,
}

impl MatSet {
    fn new() -> Self {
        MatSet { buckets: HashMap::new(), quantum: 1e-6, tol: 1e-9 }
    }

    fn key(&self, m: &MoebiusMap) -> (i64, i64) {
        ((m.a / self.quantum).round() as i64, (m.b / self.quantum).round() as i64)
    }

    fn matches(&self, m: &MoebiusMap, n: &MoebiusMap) -> bool {
        let scale = 1.0 + m.norm_inf().max(n.norm_inf());
        (m.a - n.a).abs() <= self.tol * scale
            && (m.b - n.b).abs() <= self.tol * scale
            && (m.c - n.c).abs() <= self.tol * scale
            && (m.d - n.d).abs() <= self.tol * scale
    }

    /// Insert if new; returns false when an equal element was present.
    fn insert(&mut self, m: MoebiusMap) -> bool {
        let (ka, kb) = self.key(&m);
        for da in -1..=1 {
            for db in -1..=1 {
                if let Some(v) = self.buckets.get(&(ka + da, kb + db)) {
                    if v.iter().any(|n| self.matches(&m, n)) {
                        return false;
                    }
                }
            }
        }
        self.buckets.entry((ka, kb)).or_default().push(m);
        true
    }
}

/// Breadth-first orbit ball: all elements with displacement at most
/// `radius`, exploring words whose displacement stays below
/// `radius + slack` to cover backtracking paths.
pub fn orbit_ball(
    gens: &[(i32, MoebiusMap)],
    basepoint: &PointH2,
    radius: f64,
    slack: f64,
) -> Ball {
    let explore = radius + slack;
    let mut seen = MatSet::new();
    seen.insert(MoebiusMap::IDENTITY);
    let mut out = vec![BallElt { word: Word::identity(), mat: MoebiusMap::IDENTITY, disp: 0.0 }];
    let mut frontier: Vec<(Word, MoebiusMap)> = vec![(Word::identity(), MoebiusMap::IDENTITY)];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for (w, m) in frontier {
            for &(letter, g) in gens {
                if w.letters().last() == Some(&-letter) {
                    continue; // immediate backtrack
                }
                let nm = m.compose(&g);
                let disp = basepoint.dist(&nm.apply(basepoint));
                if disp > explore {
                    continue;
                }
                if seen.insert(nm) {
                    let nw = w.concat(&Word::single(letter));
                    if disp <= radius {
                        out.push(BallElt { word: nw.clone(), mat: nm, disp });
                    }
                    next.push((nw, nm));
                }
            }
        }
        frontier = next;
    }
    out.sort_by(|x, y| {
        x.disp
            .partial_cmp(&y.disp)
            .unwrap()
            .then_with(|| x.word.len().cmp(&y.word.len()))
            .then_with(|| x.word.cmp(&y.word))
    });
    Ball { radius, elements: out }
}

/// Greedy point reduction: find `w` in the descent set minimizing
/// `d(o, w^{-1} p)` by repeated improvement. Returns the reducing word (as a
/// matrix pair) and the reduced point.
pub fn reduce_point(
    descent: &Ball,
    basepoint: &PointH2,
    p: &PointH2,
) -> (MoebiusMap, PointH2) {
    let mut total = MoebiusMap::IDENTITY;
    let mut q = *p;
    let mut best = basepoint.dist(&q);
    loop {
        let mut improved = false;
        for e in &descent.elements {
            let cand = e.mat.inverse().apply(&q);
            let d = basepoint.dist(&cand);
            if d < best - 1e-12 {
                best = d;
                q = cand;
                total = total.compose(&e.mat);
                improved = true;
                break;
            }
        }
        if !improved {
            return (total, q);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// A free group of rank 2 acting with a large ball: translations along
    /// two perpendicular axes.
    fn free_gens() -> Vec<(i32, MoebiusMap)> {
        let a = MoebiusMap::axis_translation(3.0);
        let t = 1.5f64;
        let b = MoebiusMap::new(t.cosh(), t.sinh(), t.sinh(), t.cosh()).unwrap();
        vec![(1, a), (-1, a.inverse()), (2, b), (-2, b.inverse())]
    }

    #[test]
    fn ball_contains_generators_and_is_sorted() {
        let o = PointH2 { x: 0.0, y: 1.0 };
        let ball = orbit_ball(&free_gens(), &o, 6.5, 2.0);
        assert!(ball.elements.len() >= 5);
        assert!(ball.elements[0].word.is_empty());
        for w in ball.elements.windows(2) {
            assert!(w[0].disp <= w[1].disp + 1e-12);
        }
        // No duplicates: matrices pairwise distinct.
        for (i, x) in ball.elements.iter().enumerate() {
            for y in &ball.elements[i + 1..] {
                let diff = (x.mat.a - y.mat.a).abs()
                    + (x.mat.b - y.mat.b).abs()
                    + (x.mat.c - y.mat.c).abs()
                    + (x.mat.d - y.mat.d).abs();
                assert!(diff > 1e-9, "duplicate elements {:?} {:?}", x.word, y.word);
            }
        }
    }

    #[test]
    fn ball_saturation_under_slack() {
        let o = PointH2 { x: 0.0, y: 1.0 };
        let b1 = orbit_ball(&free_gens(), &o, 7.0, 2.0);
        let b2 = orbit_ball(&free_gens(), &o, 7.0, 4.5);
        assert_eq!(b1.elements.len(), b2.elements.len());
    }

    #[test]
    fn reduce_point_brings_orbit_back() {
        let o = PointH2 { x: 0.0, y: 1.0 };
        let gens = free_gens();
        let ball = orbit_ball(&gens, &o, 7.0, 2.0);
        // Take a far orbit point and reduce it.
        let w = gens[0].1.compose(&gens[2].1).compose(&gens[0].1);
        let p = w.apply(&o);
        let (total, q) = reduce_point(&ball, &o, &p);
        assert!(o.dist(&q) < 1e-9);
        assert!(total.compose(&w.inverse()).dist_to_identity() < 1e-9 || o.dist(&q) < 1e-9);
    }
}
