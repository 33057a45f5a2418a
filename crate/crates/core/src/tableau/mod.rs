//! Clausal tableaux, their structural properties, grounding and side assignment.

mod ground;
mod model;
mod props;

pub use ground::{
    assign_sides, ground_tableau, instantiate, GroundingStrategy, SidePolicy, SidedClause,
};
pub use model::{
    ClauseMeta, FormTag, GlobalPosition, Node, NodeId, PosSide, Side, Tableau, TableauError,
};
pub use props::{
    check_clause_instances, check_closed, check_contiguous, check_eager, check_ground,
    check_leaf_only, check_regular, check_sides, check_tightly_connected, check_valid, is_closed,
    is_eager, is_positive_hyper, is_regular, negative_labels, PropertyCheck, TableauDiagnostics,
};
