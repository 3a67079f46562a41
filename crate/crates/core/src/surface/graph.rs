//! Pants graphs, Fenchel-Nielsen data, and the JSON surface schema.

use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// A trivalent gluing graph: `2g - 2` pairs of pants, each with slots
/// `0, 1, 2`, and `3g - 3` gluings pairing up all slots.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PantsGraph {
    pub num_pants: usize,
    pub gluings: Vec<Gluing>,
}

/// One gluing edge: two (pants, slot) ends. Self-gluings (both ends on the
/// same pants) are allowed.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Gluing {
    pub ends: [(usize, u8); 2],
}

impl PantsGraph {
    pub fn new(num_pants: usize, gluings: Vec<Gluing>) -> Result<Self> {
        let g = PantsGraph { num_pants, gluings };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_pants == 0 || self.num_pants % 2 != 0 {
            return Err(Error::BadPantsGraph(format!(
                "need a positive even number of pants, got {}",
                self.num_pants
            )));
        }
        let expected = 3 * self.num_pants / 2;
        if self.gluings.len() != expected {
            return Err(Error::BadPantsGraph(format!(
                "{} pants need {} gluings, got {}",
                self.num_pants,
                expected,
                self.gluings.len()
            )));
        }
        let mut seen = vec![false; 3 * self.num_pants];
        for glu in &self.gluings {
            for &(p, s) in &glu.ends {
                if p >= self.num_pants || s > 2 {
                    return Err(Error::BadPantsGraph(format!("bad slot reference ({p}, {s})")));
                }
                let idx = 3 * p + s as usize;
                if seen[idx] {
                    return Err(Error::BadPantsGraph(format!("slot ({p}, {s}) glued twice")));
                }
                seen[idx] = true;
            }
        }
        if seen.iter().any(|&b| !b) {
            return Err(Error::BadPantsGraph("surface is not closed: unglued slot".into()));
        }
        // Connectivity.
        let mut reached = vec![false; self.num_pants];
        let mut stack = vec![0usize];
        reached[0] = true;
        while let Some(p) = stack.pop() {
            for glu in &self.gluings {
                let [(p1, _), (p2, _)] = glu.ends;
                for (from, to) in [(p1, p2), (p2, p1)] {
                    if from == p && !reached[to] {
                        reached[to] = true;
                        stack.push(to);
                    }
                }
            }
        }
        if reached.iter().any(|&b| !b) {
            return Err(Error::BadPantsGraph("pants graph is disconnected".into()));
        }
        Ok(())
    }

    /// Genus of the closed surface: `|pants| = 2g - 2`.
    pub fn genus(&self) -> usize {
        self.num_pants / 2 + 1
    }

    /// Standard graph for genus `g >= 2`: the `2g - 2` pants sit in a cycle
    /// (slots 1 -> 0 around the cycle) and consecutive even/odd pairs are
    /// joined through slot 2. For `g = 2` this degenerates to two pants
    /// joined by three gluings.
    pub fn ring(genus: usize) -> Result<Self> {
        if genus < 2 {
            return Err(Error::BadPantsGraph(format!("genus {genus} < 2")));
        }
        let n = 2 * genus - 2;
        let mut gluings = Vec::new();
        for i in 0..n {
            gluings.push(Gluing { ends: [(i, 1), ((i + 1) % n, 0)] });
        }
        for k in 0..n / 2 {
            gluings.push(Gluing { ends: [(2 * k, 2), (2 * k + 1, 2)] });
        }
        PantsGraph::new(n, gluings)
    }

    /// Two pants glued along three curves (genus 2).
    pub fn theta(genus: usize) -> Result<Self> {
        if genus != 2 {
            return Err(Error::BadPantsGraph("theta graph is the genus-2 ring".into()));
        }
        Self::ring(2)
    }

    /// Gluing index attached to a (pants, slot) pair.
    pub fn gluing_at(&self, pants: usize, slot: u8) -> usize {
        self.gluings
            .iter()
            .position(|g| g.ends.contains(&(pants, slot)))
            .expect("validated graph covers every slot")
    }
}

/// Fenchel-Nielsen coordinates on a pants graph: one length and one twist
/// per gluing, both in length units.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct FenchelNielsen {
    pub graph: PantsGraph,
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
}

impl FenchelNielsen {
    pub fn new(graph: PantsGraph, lengths: Vec<f64>, twists: Vec<f64>) -> Result<Self> {
        graph.validate()?;
        if graph.genus() < 2 {
            return Err(Error::BadFenchelNielsen(format!("genus {} < 2", graph.genus())));
        }
        if lengths.len() != graph.gluings.len() || twists.len() != graph.gluings.len() {
            return Err(Error::BadFenchelNielsen(format!(
                "expected {} lengths and twists, got {} and {}",
                graph.gluings.len(),
                lengths.len(),
                twists.len()
            )));
        }
        for (i, &l) in lengths.iter().enumerate() {
            if !(l > 0.0) || !l.is_finite() {
                return Err(Error::BadFenchelNielsen(format!("length {i} = {l} must be positive")));
            }
        }
        for (i, &t) in twists.iter().enumerate() {
            if !t.is_finite() {
                return Err(Error::BadFenchelNielsen(format!("twist {i} = {t} must be finite")));
            }
        }
        Ok(FenchelNielsen { graph, lengths, twists })
    }
}

/// JSON schema for surface specifications consumed by the CLI.
///
/// ```json
/// {
///   "genus": 2,
///   "pants_graph": [[[0,1],[1,0]], [[1,1],[0,0]], [[0,2],[1,2]]],
///   "lengths": [2.0, 2.5, 3.0],
///   "twists": [0.1, 0.2, 0.3],
///   "label": "reference"
/// }
/// ```
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SurfaceSpecFile {
    pub genus: usize,
    pub pants_graph: Vec<[[usize; 2]; 2]>,
    pub lengths: Vec<f64>,
    pub twists: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<String>,
}

impl SurfaceSpecFile {
    /// Schema validation; returns the validated Fenchel-Nielsen data.
    pub fn validate(&self) -> Result<FenchelNielsen> {
        if self.genus < 2 {
            return Err(Error::BadFenchelNielsen(format!("genus {} < 2", self.genus)));
        }
        let num_pants = 2 * self.genus - 2;
        let gluings: Vec<Gluing> = self
            .pants_graph
            .iter()
            .map(|e| {
                Ok(Gluing {
                    ends: [
                        (e[0][0], u8::try_from(e[0][1]).map_err(|_| Error::BadPantsGraph("slot out of range".into()))?),
                        (e[1][0], u8::try_from(e[1][1]).map_err(|_| Error::BadPantsGraph("slot out of range".into()))?),
                    ],
                })
            })
            .collect::<Result<_>>()?;
        let graph = PantsGraph::new(num_pants, gluings)?;
        if graph.genus() != self.genus {
            return Err(Error::BadPantsGraph(format!(
                "edge list implies genus {}, header says {}",
                graph.genus(),
                self.genus
            )));
        }
        FenchelNielsen::new(graph, self.lengths.clone(), self.twists.clone())
    }

    /// The genus-2 reference surface used throughout the test suites.
    pub fn reference() -> Self {
        SurfaceSpecFile {
            genus: 2,
            pants_graph: vec![[[0, 1], [1, 0]], [[1, 1], [0, 0]], [[0, 2], [1, 2]]],
            lengths: vec![2.0, 2.5, 3.0],
            twists: vec![0.1, 0.2, 0.3],
            label: Some("reference".into()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ring_graphs_validate() {
        for g in 2..=4 {
            let graph = PantsGraph::ring(g).unwrap();
            assert_eq!(graph.genus(), g);
            assert_eq!(graph.gluings.len(), 3 * g - 3);
        }
    }

    #[test]
    fn rejects_bad_graphs() {
        // Unglued slot.
        assert!(PantsGraph::new(2, vec![Gluing { ends: [(0, 0), (1, 0)] }]).is_err());
        // Doubly used slot.
        let bad = vec![
            Gluing { ends: [(0, 0), (1, 0)] },
            Gluing { ends: [(0, 0), (1, 1)] },
            Gluing { ends: [(0, 2), (1, 2)] },
        ];
        assert!(PantsGraph::new(2, bad).is_err());
    }

    #[test]
    fn fn_data_validation() {
        let graph = PantsGraph::theta(2).unwrap();
        assert!(FenchelNielsen::new(graph.clone(), vec![2.0, 2.5, 3.0], vec![0.0; 3]).is_ok());
        assert!(FenchelNielsen::new(graph.clone(), vec![0.0, 2.5, 3.0], vec![0.0; 3]).is_err());
        assert!(FenchelNielsen::new(graph, vec![2.0, 2.5], vec![0.0; 3]).is_err());
    }

    #[test]
    fn spec_file_round_trip() {
        let spec = SurfaceSpecFile::reference();
        let text = serde_json::to_string(&spec).unwrap();
        let back: SurfaceSpecFile = serde_json::from_str(&text).unwrap();
        let fn_data = back.validate().unwrap();
        assert_eq!(fn_data.graph.genus(), 2);
        let mut bad = spec.clone();
        bad.genus = 1;
        assert!(bad.validate().is_err());
        let mut bad2 = spec;
        bad2.lengths[0] = -1.0;
        assert!(bad2.validate().is_err());
    }
}
