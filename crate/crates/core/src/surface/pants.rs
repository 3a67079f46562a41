//! Pair-of-pants geometry: hexagon data and the canonical holonomy frame.
//!
//! A pair of pants with boundary lengths `(l1, l2, l3)` is split by its three
//! seams (the mutual perpendiculars between boundary cuffs) into two
//! isometric right-angled hexagons with alternating sides
//! `(l1/2, d12, l2/2, d23, l3/2, d31)`. The canonical matrix frame puts cuff
//! 0 on the imaginary axis and cuff 1 at seam distance `d12` along the unit
//! semicircle; the third cuff matrix is forced by the product relation.

use crate::error::Result;
use crate::hyp2::{
    common_perpendicular, hexagon_solve, GeodesicH2, MoebiusMap, PointH2,
};
use serde::{Deserialize, Serialize};

/// Boundary lengths and pairwise seam distances of a pair of pants.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct YPiece {
    pub cuff_lengths: [f64; 3],
    /// `perpendiculars[k]` is the distance between cuffs `k` and `k + 1 mod 3`.
    pub perpendiculars: [f64; 3],
}

impl YPiece {
    pub fn perp_between(&self, i: usize, j: usize) -> f64 {
        debug_assert!(i != j && i < 3 && j < 3);
        let k = i.min(j);
        let l = i.max(j);
        match (k, l) {
            (0, 1) => self.perpendiculars[0],
            (1, 2) => self.perpendiculars[1],
            (0, 2) => self.perpendiculars[2],
            _ => unreachable!(),
        }
    }
}

/// Build the hexagon data of a pair of pants from its boundary lengths.
pub fn build_pants(l1: f64, l2: f64, l3: f64) -> Result<YPiece> {
    let (h1, h2, h3) = (l1 / 2.0, l2 / 2.0, l3 / 2.0);
    // hexagon_solve(a, b, c) returns sides (A, B, C) with C between a and b.
    let (d23, d31, d12) = hexagon_solve(h1, h2, h3)?;
    Ok(YPiece { cuff_lengths: [l1, l2, l3], perpendiculars: [d12, d23, d31] })
}

/// One boundary slot of the canonical pants frame.
#[derive(Clone, Debug)]
pub struct SlotFrame {
    /// Cuff translation in the pants' canonical frame.
    pub cuff: MoebiusMap,
    /// Axis of the cuff, oriented by its translation.
    pub axis: GeodesicH2,
    /// Marked origin: foot of the seam toward the next slot (cyclically).
    pub origin: PointH2,
    /// Isometry mapping the upward imaginary axis (with `i` at the origin)
    /// onto the oriented axis with marked origin.
    pub frame: MoebiusMap,
    /// Slot boundary word in pants-local letters (1 = a, 2 = b).
    pub word: Vec<i32>,
}

/// Canonical matrix realization of a pair of pants.
#[derive(Clone, Debug)]
pub struct PantsFrame {
    pub ypiece: YPiece,
    /// Local generators: `a` translates along cuff 0, `b` along cuff 1.
    pub gen_a: MoebiusMap,
    pub gen_b: MoebiusMap,
    pub slots: [SlotFrame; 3],
}

fn slot_frame_from(cuff: MoebiusMap, origin: PointH2, word: Vec<i32>) -> SlotFrame {
    let axis = cuff.axis().expect("cuff matrices are hyperbolic");
    let align = axis.align_to_imaginary_axis();
    let t = axis.param_of(&origin);
    let frame = align.inverse().compose(&MoebiusMap::axis_translation(t));
    SlotFrame { cuff, axis, origin, frame, word }
}

impl PantsFrame {
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<PantsFrame> {
        let ypiece = build_pants(l1, l2, l3)?;
        let d12 = ypiece.perpendiculars[0];

        let gen_a = MoebiusMap::axis_translation(l1);
        // Translation along the unit semicircle (fixing -1 and 1) by d12.
        let q = d12 / 2.0;
        let seam01 = MoebiusMap::new(q.cosh(), q.sinh(), q.sinh(), q.cosh())?;
        // Cuff 1 runs through the axis at seam distance d12, oriented so that
        // trace(a * b) = -2 cosh(l3 / 2): the hexagon identity makes the
        // third boundary close up with the right length.
        let down = MoebiusMap::axis_translation(-l2);
        let gen_b = down.conjugate_by(&seam01);
        let cuff3 = gen_a.compose(&gen_b).inverse();

        debug_assert!({
            let want = 2.0 * (l3 / 2.0).cosh();
            (cuff3.trace().abs() - want).abs() < 1e-9 * want
        });

        let axis_a = gen_a.axis()?;
        let axis_b = gen_b.axis()?;
        let axis_c = cuff3.axis()?;

        // Marked origins: slot k carries the foot of the seam toward slot k+1.
        let origin0 = PointH2 { x: 0.0, y: 1.0 }; // seam(0,1) is the unit circle
        let (origin1, _, d12_check) = common_perpendicular(&axis_b, &axis_c)?;
        let (origin2, _, _d23_check) = common_perpendicular(&axis_c, &axis_a)?;
        debug_assert!((d12_check - ypiece.perpendiculars[1]).abs() < 1e-9);

        let slots = [
            slot_frame_from(gen_a, origin0, vec![1]),
            slot_frame_from(gen_b, origin1, vec![2]),
            slot_frame_from(cuff3, origin2, vec![-2, -1]),
        ];
        Ok(PantsFrame { ypiece, gen_a, gen_b, slots })
    }

    /// Local holonomy of a pants-local word (letters +-1, +-2).
    pub fn local_holonomy(&self, word: &[i32]) -> MoebiusMap {
        let mut m = MoebiusMap::IDENTITY;
        for &l in word {
            let g = match l {
                1 => self.gen_a,
                -1 => self.gen_a.inverse(),
                2 => self.gen_b,
                -2 => self.gen_b.inverse(),
                _ => unreachable!("pants-local letters are +-1, +-2"),
            };
            m = m.compose(&g);
        }
        m
    }
}
