//! Exact combinatorics of invariant laminations for `z -> z^d` on the circle.
//!
//! Angles are exact rationals in `[0, 1)`; all predicates (linkage, circular
//! order, criticality) are decided without floating point.

pub mod angle;
pub mod chord;
pub mod enumerate;
pub mod error;
pub mod gaps;
pub mod hausdorff;
pub mod lamination;
pub mod lavaurs;
pub mod polygon;
pub mod pullback;
pub mod quad;
pub mod render;
pub mod tags;

pub use angle::{cyclically_ordered, Angle, Arc, Closedness};
pub use chord::{is_critical, linked, siblings, Chord};
pub use enumerate::{enumerate_dendritic_portraits, enumerate_with, EnumerateOptions, Enumeration};
pub use error::{Error, Result};
pub use gaps::{gaps, EdgeKind, Gap, GapEdge};
pub use hausdorff::{hausdorff_distance, CompactSet};
pub use lamination::{
    check_sibling_invariant, critical_objects, InvarianceCondition, InvarianceFailure,
    InvarianceReport, Lamination,
};
pub use lavaurs::{lavaurs_chords, lavaurs_qml};
pub use polygon::{polygon_image, polygons_intersect, Hole, Polygon};
pub use pullback::{
    pullback_generate, pullback_generate_with, CriticalPortrait, Pullback, PullbackOptions,
};
pub use quad::{
    classify_pair, strongly_linked, validate_portrait, CriticalQuadrilateral, MarkedLamination,
    PairClass,
};
pub use render::{render_lamination_svg, render_tag_svg, GeodesicStyle, RenderSpec};
pub use tags::{
    cocritical_set, family_disjoint_or_equal, minor_set, mixed_tag_relation, usc_probe,
    FamilyReport, MixedTag, TagRelation,
};
