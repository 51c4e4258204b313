//! Color edge detection in RGB space using vector order statistics.
//!
//! Pixels are treated as 3-vectors in RGB space and ranked inside each 3x3
//! window by reduced ordering (sum of Euclidean distances to the other
//! window pixels). Four order-statistics operators measure edge strength on
//! the ranked window:
//!
//! * `VR`  - vector range: distance from the highest-ranked pixel to the
//!   vector median.
//! * `MVR` - minimum vector range: minimum distance from the top-k ranked
//!   pixels to the vector median; rejects up to k-1 impulse outliers.
//! * `VD`  - vector dispersion: distance from the highest-ranked pixel to
//!   the window mean.
//! * `MVD` - mean vector dispersion: minimum over the top-k ranked pixels of
//!   the distance to the window mean.
//!
//! Directional pixel-collection schemes split the 8-neighborhood into two
//! opposing groups; the strongest group contrast orients non-maximum
//! suppression, and a threshold stage produces the final binary edge map.
//! The crate also ships synthetic ground-truth generators and edge-map
//! quality metrics (Pratt figure of merit, endpoint and component counts)
//! plus PNG/PNM codecs so the whole pipeline is scriptable end to end.

pub mod collection;
pub mod imageio;
pub mod metrics;
pub mod pipeline;
pub mod vos;

pub use collection::{
    best_direction, build_default_schemes, directional_response, parse_schemes, scheme_to_mask,
    CollectionScheme, Mask, NeighborIndex, SchemeId, SuppressionAxis,
};
pub use imageio::{load_edge_map, load_image, save_edge_map, save_image, save_response_map};
pub use metrics::{
    connected_components, endpoint_count, generate_disk_image, generate_step_image, pratt_fom,
    salt_pepper, GroundTruth, StepOrientation, PRATT_ALPHA,
};
pub use pipeline::{
    compute_response_map, detect_edges, detect_edges_with_schemes, extract_window,
    non_max_suppression, threshold, BorderPolicy, EdgeMap, PipelineConfig, ResponseMap, RgbImage,
    ThresholdMode,
};
pub use vos::{
    aggregate_distance, distance, mean_vector_dispersion, min_vector_range, reduced_order,
    vector_dispersion, vector_range, ColorPixel, Operator, OrderedWindow, WindowSample,
    MAX_DISTANCE,
};
