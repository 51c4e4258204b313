//! Synthetic ground-truth generators and edge-map quality measures:
//! endpoint counts and connected components quantify continuity, the Pratt
//! figure of merit quantifies localization.

use crate::pipeline::{EdgeMap, PipelineError, RgbImage};
use crate::vos::ColorPixel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// Conventional displacement weight for the Pratt figure of merit.
pub const PRATT_ALPHA: f64 = 1.0 / 9.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MetricsError {
    #[error("pattern needs dimensions of at least 8x8, got {width}x{height}")]
    PatternTooSmall { width: u32, height: u32 },
    #[error(
        "disk radius {radius} does not fit a {size}x{size} image (needs 2*radius + 4 <= size)"
    )]
    RadiusTooLarge { radius: u32, size: u32 },
    #[error("noise rate {rate} is outside [0, 1]")]
    InvalidNoiseRate { rate: f64 },
    #[error("ground truth has no edge pixels")]
    EmptyGroundTruth,
    #[error("edge maps have different dimensions: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
    #[error("alpha {alpha} must be a finite non-negative number")]
    InvalidAlpha { alpha: f64 },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// Reference edge map paired with a tag describing how it was generated.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroundTruth {
    map: EdgeMap,
    provenance: String,
}

impl GroundTruth {
    pub fn edge_map(&self) -> &EdgeMap {
        &self.map
    }

    pub fn into_edge_map(self) -> EdgeMap {
        self.map
    }

    pub fn provenance(&self) -> &str {
        &self.provenance
    }
}

/// Orientation of the synthetic step boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StepOrientation {
    #[default]
    Vertical,
    Horizontal,
    Diagonal,
}

impl StepOrientation {
    pub fn name(self) -> &'static str {
        match self {
            StepOrientation::Vertical => "vertical",
            StepOrientation::Horizontal => "horizontal",
            StepOrientation::Diagonal => "diagonal",
        }
    }
}

impl std::str::FromStr for StepOrientation {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "vertical" => Ok(StepOrientation::Vertical),
            "horizontal" => Ok(StepOrientation::Horizontal),
            "diagonal" => Ok(StepOrientation::Diagonal),
            other => Err(format!(
                "unknown orientation {other:?} (expected vertical|horizontal|diagonal)"
            )),
        }
    }
}

impl std::fmt::Display for StepOrientation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Two half-planes of the given colors. The ground truth marks the 1-pixel
/// boundary line on the `color_b` side: column `w/2` (vertical), row `h/2`
/// (horizontal), or the `x == y` diagonal.
pub fn generate_step_image(
    width: u32,
    height: u32,
    color_a: ColorPixel,
    color_b: ColorPixel,
    orientation: StepOrientation,
) -> Result<(RgbImage, GroundTruth), MetricsError> {
    if width < 8 || height < 8 {
        return Err(MetricsError::PatternTooSmall { width, height });
    }
    let is_b = |x: u32, y: u32| match orientation {
        StepOrientation::Vertical => x >= width / 2,
        StepOrientation::Horizontal => y >= height / 2,
        StepOrientation::Diagonal => x >= y,
    };
    let image = RgbImage::from_fn(
        width,
        height,
        |x, y| {
            if is_b(x, y) {
                color_b
            } else {
                color_a
            }
        },
    )?;
    let truth = EdgeMap::from_fn(width, height, |x, y| match orientation {
        StepOrientation::Vertical => x == width / 2,
        StepOrientation::Horizontal => y == height / 2,
        StepOrientation::Diagonal => x == y,
    });
    let provenance = format!(
        "step,{orientation},{width}x{height},a=({},{},{}),b=({},{},{})",
        color_a.r, color_a.g, color_a.b, color_b.r, color_b.g, color_b.b
    );
    Ok((
        image,
        GroundTruth {
            map: truth,
            provenance,
        },
    ))
}

/// Filled disk of `color_b` centered on a `color_a` background. The ground
/// truth is the 8-connected discrete circle: disk pixels with at least one
/// 4-neighbor outside the disk.
pub fn generate_disk_image(
    size: u32,
    radius: u32,
    color_a: ColorPixel,
    color_b: ColorPixel,
) -> Result<(RgbImage, GroundTruth), MetricsError> {
    if size < 8 {
        return Err(MetricsError::PatternTooSmall {
            width: size,
            height: size,
        });
    }
    if radius == 0 || 2 * radius + 4 > size {
        return Err(MetricsError::RadiusTooLarge { radius, size });
    }
    let center = (f64::from(size) - 1.0) / 2.0;
    let r2 = f64::from(radius) * f64::from(radius);
    let inside = |x: i64, y: i64| -> bool {
        if x < 0 || y < 0 || x >= i64::from(size) || y >= i64::from(size) {
            return false;
        }
        let dx = x as f64 - center;
        let dy = y as f64 - center;
        dx * dx + dy * dy <= r2
    };
    let image = RgbImage::from_fn(size, size, |x, y| {
        if inside(i64::from(x), i64::from(y)) {
            color_b
        } else {
            color_a
        }
    })?;
    let truth = EdgeMap::from_fn(size, size, |x, y| {
        let (x, y) = (i64::from(x), i64::from(y));
        inside(x, y)
            && [(x + 1, y), (x - 1, y), (x, y + 1), (x, y - 1)]
                .iter()
                .any(|&(nx, ny)| !inside(nx, ny))
    });
    let provenance = format!(
        "disk,{size}x{size},r={radius},a=({},{},{}),b=({},{},{})",
        color_a.r, color_a.g, color_a.b, color_b.r, color_b.g, color_b.b
    );
    Ok((
        image,
        GroundTruth {
            map: truth,
            provenance,
        },
    ))
}

/// Salt-and-pepper noise: each pixel independently becomes pure white or
/// pure black with probability `rate`, deterministically from the seed.
pub fn salt_pepper(image: &RgbImage, rate: f64, seed: u64) -> Result<RgbImage, MetricsError> {
    if !rate.is_finite() || !(0.0..=1.0).contains(&rate) {
        return Err(MetricsError::InvalidNoiseRate { rate });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = image.clone();
    for y in 0..image.height() {
        for x in 0..image.width() {
            if rng.random::<f64>() < rate {
                let value = if rng.random::<bool>() { 255 } else { 0 };
                out.set(x, y, ColorPixel::from_u8(value, value, value));
            }
        }
    }
    Ok(out)
}

fn neighbors8(x: u32, y: u32, width: u32, height: u32) -> impl Iterator<Item = (u32, u32)> {
    let (x, y) = (i64::from(x), i64::from(y));
    let (w, h) = (i64::from(width), i64::from(height));
    [
        (-1, -1),
        (0, -1),
        (1, -1),
        (-1, 0),
        (1, 0),
        (-1, 1),
        (0, 1),
        (1, 1),
    ]
    .into_iter()
    .filter_map(move |(dx, dy)| {
        let (nx, ny) = (x + dx, y + dy);
        ((0..w).contains(&nx) && (0..h).contains(&ny)).then_some((nx as u32, ny as u32))
    })
}

/// Edge pixels with exactly one edge pixel among their 8 neighbors; each
/// one is a loose end of a broken contour.
pub fn endpoint_count(map: &EdgeMap) -> usize {
    let mut count = 0;
    for y in 0..map.height() {
        for x in 0..map.width() {
            if !map.is_edge(x, y) {
                continue;
            }
            let edge_neighbors = neighbors8(x, y, map.width(), map.height())
                .filter(|&(nx, ny)| map.is_edge(nx, ny))
                .count();
            if edge_neighbors == 1 {
                count += 1;
            }
        }
    }
    count
}

/// Number of 8-connected components of edge pixels.
pub fn connected_components(map: &EdgeMap) -> usize {
    let width = map.width() as usize;
    let mut visited = vec![false; width * map.height() as usize];
    let mut components = 0;
    let mut stack = Vec::new();
    for y in 0..map.height() {
        for x in 0..map.width() {
            let idx = y as usize * width + x as usize;
            if !map.is_edge(x, y) || visited[idx] {
                continue;
            }
            components += 1;
            visited[idx] = true;
            stack.push((x, y));
            while let Some((cx, cy)) = stack.pop() {
                for (nx, ny) in neighbors8(cx, cy, map.width(), map.height()) {
                    let nidx = ny as usize * width + nx as usize;
                    if map.is_edge(nx, ny) && !visited[nidx] {
                        visited[nidx] = true;
                        stack.push((nx, ny));
                    }
                }
            }
        }
    }
    components
}

/// Pratt figure of merit in [0, 1]:
/// `(1 / max(N_d, N_t)) * sum over detected pixels of 1 / (1 + alpha d^2)`
/// where `d` is the Euclidean distance to the nearest truth pixel, found by
/// exhaustive search. An empty detection scores 0; empty ground truth is an
/// error.
pub fn pratt_fom(detected: &EdgeMap, truth: &EdgeMap, alpha: f64) -> Result<f64, MetricsError> {
    if detected.width() != truth.width() || detected.height() != truth.height() {
        return Err(MetricsError::DimensionMismatch(
            detected.width(),
            detected.height(),
            truth.width(),
            truth.height(),
        ));
    }
    if !alpha.is_finite() || alpha < 0.0 {
        return Err(MetricsError::InvalidAlpha { alpha });
    }
    let truth_pixels = truth.edge_pixels();
    if truth_pixels.is_empty() {
        return Err(MetricsError::EmptyGroundTruth);
    }
    let detected_pixels = detected.edge_pixels();
    if detected_pixels.is_empty() {
        return Ok(0.0);
    }
    let mut sum = 0.0;
    for &(x, y) in &detected_pixels {
        let mut best = f64::INFINITY;
        for &(tx, ty) in &truth_pixels {
            let dx = f64::from(x) - f64::from(tx);
            let dy = f64::from(y) - f64::from(ty);
            let d2 = dx * dx + dy * dy;
            if d2 < best {
                best = d2;
            }
        }
        sum += 1.0 / (1.0 + alpha * best);
    }
    Ok(sum / detected_pixels.len().max(truth_pixels.len()) as f64)
}
