//! Exact character theory for small polycyclic groups and their central extensions.
//!
//! Values live in cyclotomic fields with rational coefficients; no floating point
//! enters any comparison. The pipeline runs from a textual presentation
//! ([`dsl`]) through collection ([`pcgroup`]) to matrix representations
//! ([`repcore`]) built by Mackey induction ([`mackey`]), with the built-in groups
//! and their verification suite in [`catalog`] and exports in [`table`].

pub mod catalog;
pub mod cyclotomic;
pub mod dsl;
pub mod mackey;
pub mod matrix;
pub mod pcgroup;
pub mod repcore;
pub mod table;

pub use catalog::{build, CatalogError, CatalogGroup, CheckResult, ExpectedFile, Irrep};
pub use cyclotomic::Cyclotomic;
pub use dsl::{parse, parse_document, parse_tower, render, ParseError, PcDocument, TowerSpec};
pub use mackey::{full_dual, MackeyError, SectionPolicy, Tower};
pub use matrix::CycMatrix;
pub use pcgroup::{
    one_step_extension, CentralExtension, GroupElement, GroupError, PcGroup, PcPresentation, StructureReport, Subgroup,
};
pub use repcore::{sectional_restriction, ClassFunction, FactorSet, MatrixRep, RepError, RepLabel, SpinType};
pub use table::CharacterTable;
