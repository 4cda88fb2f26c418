//! Channel polarization: the transform, synthesized channels, code
//! construction and source/broadcast polarization sets.
//!
//! Indices are 0-based throughout; position `i` is the synthesized channel
//! `W_N^(i+1)` that decodes `u_{i+1}` given `u_1..u_i`.

mod classical;
mod construct;
pub mod prefix;
mod source;
mod split;
mod transform;

pub use classical::{bec_erasures, PairChannel};
pub use construct::{construct, construct_from_params, satisfies_coding_rule, smallest_k};
pub use prefix::{tree_stats, Letters, TreeStats};
pub use source::{
    beta_threshold, broadcast_sets, shaping_info_set, shaping_sets, AuxiliaryLaw, PolarizationSets,
    ShapingInfoSet, ShapingSets, ZProfile, DEFAULT_BETA, DEFAULT_THRESHOLD,
};
pub use split::{
    classical_split_params, conservation_check, params_from_tree, split_channel,
    split_channel_shaped, split_params, tree_split_params, Branch, SplitChannel, SplitParams,
};
pub use transform::{coset_encode, encode, CodeOrigin, PolarCode, PolarTransform};
