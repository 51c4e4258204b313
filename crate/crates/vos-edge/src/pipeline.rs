//! End-to-end edge detector: windowing with a border policy, operator
//! response map with per-pixel direction, non-maximum suppression, and
//! thresholding down to a binary edge map.

use crate::collection::{
    best_direction, build_default_schemes, CollectionError, CollectionScheme, SchemeId,
};
use crate::vos::{reduced_order, ColorPixel, Operator, VosError, WindowSample, MAX_DISTANCE};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PipelineError {
    #[error("image dimensions {width}x{height} are invalid")]
    InvalidDimensions { width: u32, height: u32 },
    #[error("pixel buffer holds {got} pixels, expected {expected}")]
    PixelCountMismatch { expected: usize, got: usize },
    #[error("coordinates ({x}, {y}) are outside a {width}x{height} image")]
    OutOfBounds {
        x: u32,
        y: u32,
        width: u32,
        height: u32,
    },
    #[error("fixed threshold {value} is outside [0, {MAX_DISTANCE}]")]
    InvalidThreshold { value: f64 },
    #[error("percentile {value} is outside the open interval (0, 100)")]
    InvalidPercentile { value: f64 },
    #[error(transparent)]
    Vos(#[from] VosError),
    #[error(transparent)]
    Collection(#[from] CollectionError),
}

/// Row-major RGB raster with real-valued channels.
#[derive(Debug, Clone, PartialEq)]
pub struct RgbImage {
    width: u32,
    height: u32,
    pixels: Vec<ColorPixel>,
}

impl RgbImage {
    pub fn new(width: u32, height: u32, pixels: Vec<ColorPixel>) -> Result<Self, PipelineError> {
        if width == 0 || height == 0 {
            return Err(PipelineError::InvalidDimensions { width, height });
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(PipelineError::PixelCountMismatch {
                expected,
                got: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Build from a per-coordinate function.
    pub fn from_fn(
        width: u32,
        height: u32,
        mut f: impl FnMut(u32, u32) -> ColorPixel,
    ) -> Result<Self, PipelineError> {
        if width == 0 || height == 0 {
            return Err(PipelineError::InvalidDimensions { width, height });
        }
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// Constant-color image.
    pub fn filled(width: u32, height: u32, color: ColorPixel) -> Result<Self, PipelineError> {
        Self::from_fn(width, height, |_, _| color)
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn get(&self, x: u32, y: u32) -> ColorPixel {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, pixel: ColorPixel) {
        debug_assert!(x < self.width && y < self.height);
        self.pixels[y as usize * self.width as usize + x as usize] = pixel;
    }

    pub fn pixels(&self) -> &[ColorPixel] {
        &self.pixels
    }

    /// Apply one fixed channel permutation to every pixel (r,g,b) -> (g,b,r)
    /// or similar; used by determinism checks.
    pub fn map_pixels(&self, f: impl Fn(ColorPixel) -> ColorPixel) -> RgbImage {
        RgbImage {
            width: self.width,
            height: self.height,
            pixels: self.pixels.iter().copied().map(f).collect(),
        }
    }
}

/// How 3x3 windows read pixels beyond the image edge.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BorderPolicy {
    /// Repeat the nearest edge pixel.
    #[default]
    Replicate,
    /// Mirror about the edge pixel (the pixel just outside (-1) maps to +1).
    Reflect,
    /// Out-of-image pixels read as black (0, 0, 0).
    Zero,
}

impl BorderPolicy {
    pub fn name(self) -> &'static str {
        match self {
            BorderPolicy::Replicate => "replicate",
            BorderPolicy::Reflect => "reflect",
            BorderPolicy::Zero => "zero",
        }
    }
}

impl std::str::FromStr for BorderPolicy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "replicate" => Ok(BorderPolicy::Replicate),
            "reflect" => Ok(BorderPolicy::Reflect),
            "zero" => Ok(BorderPolicy::Zero),
            other => Err(format!(
                "unknown border policy {other:?} (expected replicate|reflect|zero)"
            )),
        }
    }
}

impl std::fmt::Display for BorderPolicy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Edge/non-edge decision rule applied to the response map.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ThresholdMode {
    /// Edge iff response > T.
    Fixed(f64),
    /// T maximizes between-class variance over a 512-bin histogram of all
    /// responses in [0, MAX_DISTANCE].
    Otsu,
    /// T is the p-th percentile (nearest-rank) of the nonzero responses.
    Percentile(f64),
}

/// Detector configuration. `Default` is the recommended setup: MVR with
/// k = 3, NMS on, Otsu threshold, replicate border.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PipelineConfig {
    pub operator: Operator,
    pub k: usize,
    pub threshold: ThresholdMode,
    pub nms: bool,
    pub border: BorderPolicy,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        Self {
            operator: Operator::MinVectorRange,
            k: 3,
            threshold: ThresholdMode::Otsu,
            nms: true,
            border: BorderPolicy::Replicate,
        }
    }
}

impl PipelineConfig {
    pub fn validate(&self) -> Result<(), PipelineError> {
        if !(1..=8).contains(&self.k) {
            return Err(VosError::InvalidRankDepth { k: self.k }.into());
        }
        match self.threshold {
            ThresholdMode::Fixed(t) => {
                if !t.is_finite() || !(0.0..=MAX_DISTANCE).contains(&t) {
                    return Err(PipelineError::InvalidThreshold { value: t });
                }
            }
            ThresholdMode::Percentile(p) => {
                if !p.is_finite() || p <= 0.0 || p >= 100.0 {
                    return Err(PipelineError::InvalidPercentile { value: p });
                }
            }
            ThresholdMode::Otsu => {}
        }
        Ok(())
    }
}

/// Per-pixel operator magnitude plus the strongest collection direction.
#[derive(Debug, Clone, PartialEq)]
pub struct ResponseMap {
    width: u32,
    height: u32,
    responses: Vec<f64>,
    directions: Vec<SchemeId>,
}

impl ResponseMap {
    pub fn new(
        width: u32,
        height: u32,
        responses: Vec<f64>,
        directions: Vec<SchemeId>,
    ) -> Result<Self, PipelineError> {
        if width == 0 || height == 0 {
            return Err(PipelineError::InvalidDimensions { width, height });
        }
        let expected = width as usize * height as usize;
        if responses.len() != expected || directions.len() != expected {
            return Err(PipelineError::PixelCountMismatch {
                expected,
                got: responses.len(),
            });
        }
        Ok(Self {
            width,
            height,
            responses,
            directions,
        })
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn response(&self, x: u32, y: u32) -> f64 {
        self.responses[y as usize * self.width as usize + x as usize]
    }

    pub fn direction(&self, x: u32, y: u32) -> SchemeId {
        self.directions[y as usize * self.width as usize + x as usize]
    }

    pub fn responses(&self) -> &[f64] {
        &self.responses
    }

    pub fn directions(&self) -> &[SchemeId] {
        &self.directions
    }
}

/// Binary edge decision per pixel.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeMap {
    width: u32,
    height: u32,
    edges: Vec<bool>,
}

impl EdgeMap {
    pub fn new_empty(width: u32, height: u32) -> Self {
        Self {
            width,
            height,
            edges: vec![false; width as usize * height as usize],
        }
    }

    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> bool) -> Self {
        let mut edges = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                edges.push(f(x, y));
            }
        }
        Self {
            width,
            height,
            edges,
        }
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    pub fn is_edge(&self, x: u32, y: u32) -> bool {
        self.edges[y as usize * self.width as usize + x as usize]
    }

    pub fn set_edge(&mut self, x: u32, y: u32, edge: bool) {
        self.edges[y as usize * self.width as usize + x as usize] = edge;
    }

    /// Number of edge pixels.
    pub fn edge_count(&self) -> usize {
        self.edges.iter().filter(|&&e| e).count()
    }

    pub fn edges(&self) -> &[bool] {
        &self.edges
    }

    /// Coordinates of all edge pixels in row-major order.
    pub fn edge_pixels(&self) -> Vec<(u32, u32)> {
        let mut out = Vec::new();
        for y in 0..self.height {
            for x in 0..self.width {
                if self.is_edge(x, y) {
                    out.push((x, y));
                }
            }
        }
        out
    }
}

fn resolve_coord(value: i64, size: i64, border: BorderPolicy) -> Option<i64> {
    if (0..size).contains(&value) {
        return Some(value);
    }
    match border {
        BorderPolicy::Replicate => Some(value.clamp(0, size - 1)),
        BorderPolicy::Reflect => {
            if size == 1 {
                return Some(0);
            }
            // Radius-1 windows need at most one fold.
            let mirrored = if value < 0 {
                -value
            } else {
                2 * size - 2 - value
            };
            Some(mirrored.clamp(0, size - 1))
        }
        BorderPolicy::Zero => None,
    }
}

/// The 3x3 neighborhood around `(x, y)` in row-major order, with
/// out-of-image neighbors filled per the border policy.
pub fn extract_window(
    image: &RgbImage,
    x: u32,
    y: u32,
    border: BorderPolicy,
) -> Result<WindowSample, PipelineError> {
    if x >= image.width() || y >= image.height() {
        return Err(PipelineError::OutOfBounds {
            x,
            y,
            width: image.width(),
            height: image.height(),
        });
    }
    Ok(window_at(image, x, y, border))
}

fn window_at(image: &RgbImage, x: u32, y: u32, border: BorderPolicy) -> WindowSample {
    let w = i64::from(image.width());
    let h = i64::from(image.height());
    let mut pixels = [ColorPixel::default(); 9];
    for row in 0..3i64 {
        for col in 0..3i64 {
            let sx = resolve_coord(i64::from(x) + col - 1, w, border);
            let sy = resolve_coord(i64::from(y) + row - 1, h, border);
            pixels[(3 * row + col) as usize] = match (sx, sy) {
                (Some(sx), Some(sy)) => image.get(sx as u32, sy as u32),
                _ => ColorPixel::default(),
            };
        }
    }
    WindowSample::new(pixels)
}

/// Evaluate the configured operator and the strongest collection direction
/// at every pixel, using the built-in schemes.
pub fn compute_response_map(
    image: &RgbImage,
    config: &PipelineConfig,
) -> Result<ResponseMap, PipelineError> {
    compute_response_map_with_schemes(image, config, &build_default_schemes())
}

/// [`compute_response_map`] with a caller-supplied scheme set.
pub fn compute_response_map_with_schemes(
    image: &RgbImage,
    config: &PipelineConfig,
    schemes: &[CollectionScheme],
) -> Result<ResponseMap, PipelineError> {
    config.validate()?;
    if schemes.is_empty() {
        return Err(CollectionError::NoSchemes.into());
    }
    let count = image.width() as usize * image.height() as usize;
    let mut responses = Vec::with_capacity(count);
    let mut directions = Vec::with_capacity(count);
    for y in 0..image.height() {
        for x in 0..image.width() {
            let window = window_at(image, x, y, config.border);
            let ordered = reduced_order(&window);
            let response = config.operator.evaluate(&ordered, &window, config.k)?;
            let (direction, _) = best_direction(&window, schemes)?;
            responses.push(response);
            directions.push(direction);
        }
    }
    ResponseMap::new(image.width(), image.height(), responses, directions)
}

/// Thin responses to local maxima along each pixel's suppression axis.
///
/// A pixel survives when its response is >= the backward neighbor and
/// strictly greater than the forward neighbor along the axis (neighbors
/// outside the map read as 0). The asymmetric tie rule thins a run of equal
/// maxima to its forward-most pixel, so a two-pixel plateau straddling a
/// color boundary yields a single-pixel edge instead of a double line.
/// Suppressed pixels get response 0; directions are preserved.
pub fn non_max_suppression(map: &ResponseMap) -> ResponseMap {
    let width = map.width();
    let height = map.height();
    let read = |x: i64, y: i64| -> f64 {
        if x < 0 || y < 0 || x >= i64::from(width) || y >= i64::from(height) {
            0.0
        } else {
            map.response(x as u32, y as u32)
        }
    };
    let mut responses = Vec::with_capacity(map.responses().len());
    for y in 0..height {
        for x in 0..width {
            let response = map.response(x, y);
            let ((bx, by), (fx, fy)) = map.direction(x, y).suppression_axis().offsets();
            let backward = read(i64::from(x) + bx, i64::from(y) + by);
            let forward = read(i64::from(x) + fx, i64::from(y) + fy);
            let kept = response >= backward && response > forward;
            responses.push(if kept { response } else { 0.0 });
        }
    }
    ResponseMap {
        width,
        height,
        responses,
        directions: map.directions().to_vec(),
    }
}

/// Number of histogram bins used by the Otsu threshold search.
pub const OTSU_BINS: usize = 512;

/// Otsu threshold over a 512-bin histogram of the responses on
/// [0, MAX_DISTANCE]. Returns the upper boundary of the background class's
/// top bin; the first bin split maximizing between-class variance wins.
/// Degenerate maps (all responses in one bin) fall back to 0.
pub fn otsu_threshold(map: &ResponseMap) -> f64 {
    let bin_width = MAX_DISTANCE / OTSU_BINS as f64;
    let mut histogram = [0u64; OTSU_BINS];
    for &r in map.responses() {
        let bin = ((r / bin_width) as usize).min(OTSU_BINS - 1);
        histogram[bin] += 1;
    }
    let total = map.responses().len() as f64;
    let total_sum: f64 = histogram
        .iter()
        .enumerate()
        .map(|(i, &h)| i as f64 * h as f64)
        .sum();

    let mut weight_bg = 0.0;
    let mut sum_bg = 0.0;
    let mut best_variance = f64::NEG_INFINITY;
    let mut best_bin: Option<usize> = None;
    for (bin, &count) in histogram.iter().enumerate() {
        weight_bg += count as f64;
        if weight_bg == 0.0 {
            continue;
        }
        let weight_fg = total - weight_bg;
        if weight_fg == 0.0 {
            break;
        }
        sum_bg += bin as f64 * count as f64;
        let mean_bg = sum_bg / weight_bg;
        let mean_fg = (total_sum - sum_bg) / weight_fg;
        let diff = mean_bg - mean_fg;
        let variance = weight_bg * weight_fg * diff * diff;
        if variance > best_variance {
            best_variance = variance;
            best_bin = Some(bin);
        }
    }
    match best_bin {
        Some(bin) => (bin + 1) as f64 * bin_width,
        None => 0.0,
    }
}

/// Nearest-rank percentile of the nonzero responses. Returns
/// `MAX_DISTANCE` when no response is nonzero, which makes the edge map
/// empty under the strict `>` rule.
fn percentile_threshold(map: &ResponseMap, p: f64) -> f64 {
    let mut nonzero: Vec<f64> = map
        .responses()
        .iter()
        .copied()
        .filter(|&r| r > 0.0)
        .collect();
    if nonzero.is_empty() {
        return MAX_DISTANCE;
    }
    nonzero.sort_unstable_by(f64::total_cmp);
    let rank = ((p / 100.0) * nonzero.len() as f64).ceil() as usize;
    nonzero[rank.clamp(1, nonzero.len()) - 1]
}

/// The threshold value a mode resolves to on a given response map.
pub fn resolve_threshold(map: &ResponseMap, mode: &ThresholdMode) -> f64 {
    match *mode {
        ThresholdMode::Fixed(t) => t,
        ThresholdMode::Otsu => otsu_threshold(map),
        ThresholdMode::Percentile(p) => percentile_threshold(map, p),
    }
}

/// Edge iff response is strictly greater than `t`.
pub fn apply_threshold(map: &ResponseMap, t: f64) -> EdgeMap {
    EdgeMap {
        width: map.width(),
        height: map.height(),
        edges: map.responses().iter().map(|&r| r > t).collect(),
    }
}

/// Classify each pixel by resolving the mode's threshold and applying it.
pub fn threshold(map: &ResponseMap, mode: &ThresholdMode) -> EdgeMap {
    apply_threshold(map, resolve_threshold(map, mode))
}

/// Run the whole detector: response map, optional NMS, threshold.
pub fn detect_edges(image: &RgbImage, config: &PipelineConfig) -> Result<EdgeMap, PipelineError> {
    detect_edges_with_schemes(image, config, &build_default_schemes())
}

/// [`detect_edges`] with a caller-supplied scheme set.
pub fn detect_edges_with_schemes(
    image: &RgbImage,
    config: &PipelineConfig,
    schemes: &[CollectionScheme],
) -> Result<EdgeMap, PipelineError> {
    let mut map = compute_response_map_with_schemes(image, config, schemes)?;
    if config.nms {
        map = non_max_suppression(&map);
    }
    Ok(threshold(&map, &config.threshold))
}
