//! Resolutions, chain maps, cell objects and Ext charts.

use thiserror::Error;

pub mod cell;
pub mod complex;
pub mod ext;
pub mod les;
pub mod windows;
pub mod maps;
pub mod resolution;

pub use complex::{FreeComplex, Generator, Layout, Sparse};
pub use cell::{cells_of_tensor, cone, cone_on_class, h8, h8v18, select_self_map, Cell, CellMap, CellObject, SelfMapSelection};
pub use ext::{ext_cell, ext_f2, ext_module, standard_class, yoneda_product, ChartOptions, ClassGroup, ExtChart, NamedClass, ProductTable};
pub use les::{iterate_product, les_consistency, periodicity, products_commute, torsion_exponent, v1_4_edge, Report, Violation};
pub use windows::{cell_bound, lemma_v2_8_windows, tmfres_windows, Expect, Method, TmfresPlan, WindowCheck, WindowReport, TOP_CELL_SOURCES};
pub use maps::{lift_chain_map, null_homotopy, FMap, Obstruction};
pub use resolution::{algebra_for, minimal_resolution, FreeResolution, ResolutionDocument, Solver};

#[derive(Debug, Error)]
pub enum ResolveError {
    #[error("bidegree (s={s}, t={t}) is outside the computed range")]
    OutOfRange { s: usize, t: i32 },
    #[error("algebra table reaches degree {have}, resolution needs {need}")]
    AlgebraTooSmall { have: u32, need: i32 },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error(transparent)]
    Module(#[from] crate::comod::ModuleError),
    #[error("attaching class is zero; the cone would split")]
    ZeroAttachingClass,
    #[error("no self-map of shift ({s},{t}) restricts to the requested bottom class")]
    NoSelfMap { s: usize, t: i32 },
}
