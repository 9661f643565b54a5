//! File formats.

pub mod chartab;
pub mod classes;
pub mod group_file;

pub use chartab::{parse_character_table, write_character_table};
pub use classes::{parse_class_listing, write_class_listing, ClassListing, ClassRecord};
pub use group_file::{
    parse_group_file, parse_group_json, parse_group_text, parse_permutation_list, write_group_json, write_group_text,
    GroupSpec,
};
