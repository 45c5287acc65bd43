//! Dataset loading and attribute profiling.

mod dataset;
mod profile;

pub use dataset::{load_dataset, load_dataset_path, Dataset, SourceFormat};
pub use profile::{
    get_metadata, infer_metadata, infer_metadata_shared, json_number, parse_date, parse_number, set_alias_map,
    set_attribute_type, AttrType, AttributeMetadata, DatasetProfile, Domain,
};
