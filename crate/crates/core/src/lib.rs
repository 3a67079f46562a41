//! Computational geometry of closed hyperbolic surfaces.
//!
//! The crate builds surfaces of genus `g >= 2` from Fenchel-Nielsen data on a
//! pants graph, realizes free homotopy classes of curves as closed geodesics,
//! and measures the quantities that make those surfaces comparable without a
//! marking: lengths, geometric intersection numbers, and cyclically ordered
//! sets of intersection angles.  On top of that sit Dehn-twist sweeps, the
//! length-angle spectrum of a surface, and reconstruction pipelines that
//! recover geometric data back out of spectra.
//!
//! A quick tour (this example is mirrored in the guide under `book/`):
//!
//! ```
//! use hypspec::surface::{FenchelNielsen, PantsGraph, Surface};
//!
//! // Genus 2: two pairs of pants glued along three curves.
//! let graph = PantsGraph::theta(2).unwrap();
//! let fn_data = FenchelNielsen::new(graph, vec![2.0, 2.5, 3.0], vec![0.1, 0.2, 0.3]).unwrap();
//! let surface = Surface::build(&fn_data).unwrap();
//!
//! assert!(surface.relator_residual() < 1e-9);
//! let alpha = surface.pants_curve(0);
//! assert!((alpha.length - 2.0).abs() < 1e-9);
//! ```
//!
//! Modules follow the layers of the computation:
//!
//! - [`hyp2`]: upper half-plane model, Moebius maps, geodesics, angles.
//! - [`words`]: reduced words in the surface-group generators.
//! - [`surface`]: pants graphs, Fenchel-Nielsen data, the developed
//!   holonomy representation, collars and Fermi coordinates.
//! - [`deck`]: deck-group utilities (orbit balls, point reduction).
//! - [`curves`]: geodesic representatives, simplicity, intersection
//!   numbers, Dehn twists and twist-length bounds.
//! - [`angles`]: ordered angle sets, collar traces, twist asymptotics.
//! - [`spectrum`]: enumeration of simple closed geodesics and the
//!   length-angle spectrum with comparison tooling.
//! - [`reconstruct`]: rigidity pipelines (one-holed torus round trip,
//!   angle-separated pants decompositions, spectrum self-recovery).

pub mod angles;
pub mod config;
pub mod curves;
pub mod deck;
pub mod error;
pub mod hyp2;
pub mod reconstruct;
pub mod spectrum;
pub mod surface;
pub mod walk;
pub mod words;

pub use config::Tolerances;
pub use error::{Error, Result};

/// Library version string, embedded in report files.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
