//! Exact computations in the Chevalley group G₂ over small finite fields.

pub mod chevalley;
pub mod cohomology;
pub mod error;
pub mod finitegroup;
pub mod gf;
pub mod linalg;
pub mod repanalysis;
pub mod rootsystem;
pub mod subgroups;
pub mod suites;

pub use chevalley::{build_rep, commutator_coeffs, CommTerm, GroupWord, Letter, LetterKind, Rep, RepElement};
pub use error::{Error, Result};
pub use gf::{field_make, Field, FieldElement, FieldRef};
pub use linalg::{Matrix, Subspace, Vector};
pub use rootsystem::{abs_filtration, pairing, positive_roots, weyl_group, LevelModule, Parabolic, Root};
pub use finitegroup::{conjugacy_search, enumerate_group, fixed_space, group_order, Conjugator, ElementStore};
pub use repanalysis::{restriction_report, signature, socle_series, table_field, FactorSignature, ModuleRep, RestrictionReport};
pub use cohomology::{complement_classes, h1_dim, layered_descent, ComplementClasses, Descent, H1Result, Sl2Module};
pub use subgroups::{subgroup_generators, GeneratorSet, SubgroupName, SubgroupSpec};
pub use suites::{run_suite, Check, CheckVerdict, SuiteName, SuiteParams, SuiteReport};
