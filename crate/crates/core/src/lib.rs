//! Finitely generated additive groups of transcendental numbers.

pub mod algebraic;
pub mod element;
pub mod error;
pub mod interval;
pub mod group;
pub mod lattice;
pub mod oracle;
pub mod parse;
pub mod poly;
pub mod rational;
pub mod smallelem;
pub mod symbol;
pub mod topology;

pub use algebraic::{AlgebraicNumber, Limits};
pub use element::{Atom, Element, Evidence, Transcendence, TriBool, UnknownReason};
pub use error::{Error, Result};
pub use rational::{GaussianRational, Rational};
pub use symbol::{Binding, Bindings, Family, Symbol, SymbolKind};
pub use group::{is_cyclic_pair, Context, Cyclicity, FGGroup, Membership, Rank, Verdict};
pub use smallelem::{relation_search, relation_search_with, small_element, RelationSearchReport, SmallElement};
pub use oracle::{brute_member, brute_min_norm, brute_small, BruteMembership};
pub use topology::{classify, min_norm, span_dim, Classification, SpanDim, TopologyClass};
