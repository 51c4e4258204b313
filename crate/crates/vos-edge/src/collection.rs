//! Directional pixel-collection schemes over the 8-neighborhood, their
//! rendering as zero-sum 3x3 masks, and the per-window directional response
//! used to orient non-maximum suppression.
//!
//! A scheme splits the eight neighbors of a window into two opposing
//! groups. Step schemes cut the neighborhood along a line through the
//! center; curve schemes oppose a three-pixel arc of the neighbor ring to
//! the complementary five-pixel arc, which responds to boundaries that bend
//! inside the window.

use crate::vos::{distance, ColorPixel, WindowSample};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CollectionError {
    #[error("neighbor index {value} is outside [0, 8]")]
    IndexOutOfRange { value: usize },
    #[error("collection side must not be empty")]
    EmptySide,
    #[error("collection sides must not contain the center index 4")]
    CenterInSide,
    #[error("collection sides overlap at index {index}")]
    OverlappingSides { index: usize },
    #[error("scheme list must not be empty")]
    NoSchemes,
    #[error("line {line}: {message}")]
    ParseError { line: usize, message: String },
}

/// Position inside the 3x3 window, row-major; 4 is the center.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NeighborIndex(u8);

impl NeighborIndex {
    pub const CENTER: NeighborIndex = NeighborIndex(4);

    pub fn new(value: usize) -> Result<Self, CollectionError> {
        if value > 8 {
            return Err(CollectionError::IndexOutOfRange { value });
        }
        Ok(Self(value as u8))
    }

    pub fn value(self) -> usize {
        usize::from(self.0)
    }
}

/// Direction label of a collection scheme. `E`/`N`/`NE`/`NW` are the step
/// schemes, the `C*` variants the curve schemes sharing the same
/// suppression axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeId {
    E,
    N,
    Ne,
    Nw,
    Ce,
    Cn,
    Cne,
    Cnw,
}

impl SchemeId {
    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::E => "E",
            SchemeId::N => "N",
            SchemeId::Ne => "NE",
            SchemeId::Nw => "NW",
            SchemeId::Ce => "CE",
            SchemeId::Cn => "CN",
            SchemeId::Cne => "CNE",
            SchemeId::Cnw => "CNW",
        }
    }

    /// Axis along which non-maximum suppression compares neighbors. A
    /// scheme that separates the window across a given line has its
    /// response vary perpendicular to that line, and curve schemes reuse
    /// the axis of their base direction.
    pub fn suppression_axis(self) -> SuppressionAxis {
        match self {
            SchemeId::E | SchemeId::Ce => SuppressionAxis::Vertical,
            SchemeId::N | SchemeId::Cn => SuppressionAxis::Horizontal,
            SchemeId::Ne | SchemeId::Cne => SuppressionAxis::AntiDiagonal,
            SchemeId::Nw | SchemeId::Cnw => SuppressionAxis::MainDiagonal,
        }
    }
}

impl std::fmt::Display for SchemeId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.as_str())
    }
}

impl std::str::FromStr for SchemeId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_uppercase().as_str() {
            "E" => Ok(SchemeId::E),
            "N" => Ok(SchemeId::N),
            "NE" => Ok(SchemeId::Ne),
            "NW" => Ok(SchemeId::Nw),
            "CE" => Ok(SchemeId::Ce),
            "CN" => Ok(SchemeId::Cn),
            "CNE" => Ok(SchemeId::Cne),
            "CNW" => Ok(SchemeId::Cnw),
            other => Err(format!(
                "unknown scheme id {other:?} (expected E|N|NE|NW|CE|CN|CNE|CNW)"
            )),
        }
    }
}

/// Pixel pair offsets compared during non-maximum suppression, as
/// (backward, forward) `(dx, dy)` steps from the center pixel.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuppressionAxis {
    Horizontal,
    Vertical,
    MainDiagonal,
    AntiDiagonal,
}

impl SuppressionAxis {
    pub fn offsets(self) -> ((i64, i64), (i64, i64)) {
        match self {
            SuppressionAxis::Horizontal => ((-1, 0), (1, 0)),
            SuppressionAxis::Vertical => ((0, -1), (0, 1)),
            SuppressionAxis::MainDiagonal => ((-1, -1), (1, 1)),
            SuppressionAxis::AntiDiagonal => ((1, -1), (-1, 1)),
        }
    }
}

/// A directional split of the 8-neighborhood into two opposing pixel
/// collections. Sides are disjoint, non-empty, and never include the
/// center.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CollectionScheme {
    id: SchemeId,
    side_a: Vec<NeighborIndex>,
    side_b: Vec<NeighborIndex>,
}

impl CollectionScheme {
    pub fn new(
        id: SchemeId,
        mut side_a: Vec<NeighborIndex>,
        mut side_b: Vec<NeighborIndex>,
    ) -> Result<Self, CollectionError> {
        if side_a.is_empty() || side_b.is_empty() {
            return Err(CollectionError::EmptySide);
        }
        if side_a.contains(&NeighborIndex::CENTER) || side_b.contains(&NeighborIndex::CENTER) {
            return Err(CollectionError::CenterInSide);
        }
        side_a.sort_unstable();
        side_a.dedup();
        side_b.sort_unstable();
        side_b.dedup();
        if let Some(shared) = side_a.iter().find(|i| side_b.contains(i)) {
            return Err(CollectionError::OverlappingSides {
                index: shared.value(),
            });
        }
        Ok(Self { id, side_a, side_b })
    }

    fn from_usize(id: SchemeId, a: &[usize], b: &[usize]) -> Self {
        let side = |s: &[usize]| {
            s.iter()
                .map(|&v| NeighborIndex::new(v).expect("builtin scheme index"))
                .collect()
        };
        Self::new(id, side(a), side(b)).expect("builtin scheme is valid")
    }

    pub fn id(&self) -> SchemeId {
        self.id
    }

    pub fn side_a(&self) -> &[NeighborIndex] {
        &self.side_a
    }

    pub fn side_b(&self) -> &[NeighborIndex] {
        &self.side_b
    }
}

/// The eight built-in schemes: four step splits followed by the curve
/// family (`CE` and its successive 45-degree ring rotations `CNE`, `CN`,
/// `CNW`).
pub fn build_default_schemes() -> Vec<CollectionScheme> {
    vec![
        CollectionScheme::from_usize(SchemeId::E, &[0, 1, 2], &[6, 7, 8]),
        CollectionScheme::from_usize(SchemeId::N, &[0, 3, 6], &[2, 5, 8]),
        CollectionScheme::from_usize(SchemeId::Ne, &[1, 2, 5], &[3, 6, 7]),
        CollectionScheme::from_usize(SchemeId::Nw, &[0, 1, 3], &[5, 7, 8]),
        CollectionScheme::from_usize(SchemeId::Ce, &[0, 1, 2, 3, 5], &[6, 7, 8]),
        CollectionScheme::from_usize(SchemeId::Cne, &[0, 1, 2, 5, 8], &[3, 6, 7]),
        CollectionScheme::from_usize(SchemeId::Cn, &[1, 2, 5, 7, 8], &[0, 3, 6]),
        CollectionScheme::from_usize(SchemeId::Cnw, &[2, 5, 6, 7, 8], &[0, 1, 3]),
    ]
}

/// Zero-sum 3x3 coefficient grid for a collection scheme: `+1/|side_a|` on
/// side-a cells, `-1/|side_b|` on side-b cells, 0 elsewhere.
///
/// Coefficients are stored as integer numerators over a common denominator
/// so the zero sum is exact rather than accumulated in floating point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mask {
    numerators: [i64; 9],
    denominator: i64,
}

impl Mask {
    /// Coefficient at row-major cell `index`.
    pub fn coefficient(&self, index: usize) -> f64 {
        self.numerators[index] as f64 / self.denominator as f64
    }

    /// All nine coefficients as a row-major 3x3 grid.
    pub fn coefficients(&self) -> [[f64; 3]; 3] {
        std::array::from_fn(|row| std::array::from_fn(|col| self.coefficient(3 * row + col)))
    }

    /// Exact sum of all coefficients (always 0 for scheme masks).
    pub fn coefficient_sum(&self) -> f64 {
        let total: i64 = self.numerators.iter().sum();
        total as f64 / self.denominator as f64
    }

    /// Apply the mask to a window: per-channel weighted sum. For a scheme
    /// mask this equals `mean(side_a) - mean(side_b)` channel-wise.
    pub fn apply(&self, window: &WindowSample) -> [f64; 3] {
        let mut out = [0.0; 3];
        for (i, p) in window.pixels().iter().enumerate() {
            let c = self.coefficient(i);
            out[0] += c * p.r;
            out[1] += c * p.g;
            out[2] += c * p.b;
        }
        out
    }
}

/// Render a collection scheme as its zero-sum mask.
pub fn scheme_to_mask(scheme: &CollectionScheme) -> Mask {
    let na = scheme.side_a.len() as i64;
    let nb = scheme.side_b.len() as i64;
    let denominator = na * nb;
    let mut numerators = [0i64; 9];
    for i in &scheme.side_a {
        numerators[i.value()] = nb;
    }
    for i in &scheme.side_b {
        numerators[i.value()] = -na;
    }
    Mask {
        numerators,
        denominator,
    }
}

fn side_mean(window: &WindowSample, side: &[NeighborIndex]) -> ColorPixel {
    let mut r = 0.0;
    let mut g = 0.0;
    let mut b = 0.0;
    for i in side {
        let p = window[i.value()];
        r += p.r;
        g += p.g;
        b += p.b;
    }
    let n = side.len() as f64;
    ColorPixel {
        r: r / n,
        g: g / n,
        b: b / n,
    }
}

/// Directional edge strength of a window under one scheme: the RGB distance
/// between the channel-wise means of the two collections. Equals the vector
/// magnitude of applying the scheme's mask.
pub fn directional_response(window: &WindowSample, scheme: &CollectionScheme) -> f64 {
    distance(
        side_mean(window, &scheme.side_a),
        side_mean(window, &scheme.side_b),
    )
}

/// Strongest scheme for a window; ties break toward the earliest scheme in
/// the sequence.
pub fn best_direction(
    window: &WindowSample,
    schemes: &[CollectionScheme],
) -> Result<(SchemeId, f64), CollectionError> {
    let first = schemes.first().ok_or(CollectionError::NoSchemes)?;
    let mut best_id = first.id();
    let mut best = directional_response(window, first);
    for scheme in &schemes[1..] {
        let response = directional_response(window, scheme);
        if response > best {
            best = response;
            best_id = scheme.id();
        }
    }
    Ok((best_id, best))
}

/// Parse schemes from the plain-text config format, one scheme per line:
///
/// ```text
/// E: a={0,1,2} b={6,7,8}
/// ```
///
/// Blank lines and lines starting with `#` are ignored.
pub fn parse_schemes(text: &str) -> Result<Vec<CollectionScheme>, CollectionError> {
    let mut schemes = Vec::new();
    for (number, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        schemes.push(
            parse_scheme_line(line).map_err(|message| CollectionError::ParseError {
                line: number + 1,
                message,
            })?,
        );
    }
    if schemes.is_empty() {
        return Err(CollectionError::NoSchemes);
    }
    Ok(schemes)
}

fn parse_scheme_line(line: &str) -> Result<CollectionScheme, String> {
    let (id_part, rest) = line
        .split_once(':')
        .ok_or_else(|| "expected `id: a={...} b={...}`".to_string())?;
    let id: SchemeId = id_part.trim().parse()?;
    let rest = rest.trim();
    let (a_part, b_part) = rest
        .split_once("b=")
        .ok_or_else(|| "missing `b={...}` part".to_string())?;
    let a_part = a_part.trim();
    let side_a = a_part
        .strip_prefix("a=")
        .ok_or_else(|| "missing `a={...}` part".to_string())?;
    let parse_side = |s: &str| -> Result<Vec<NeighborIndex>, String> {
        let inner = s
            .trim()
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| format!("side {s:?} is not brace-enclosed"))?;
        inner
            .split(',')
            .map(|tok| {
                let value: usize = tok
                    .trim()
                    .parse()
                    .map_err(|_| format!("invalid index {:?}", tok.trim()))?;
                NeighborIndex::new(value).map_err(|e| e.to_string())
            })
            .collect()
    };
    let side_a = parse_side(side_a)?;
    let side_b = parse_side(b_part)?;
    CollectionScheme::new(id, side_a, side_b).map_err(|e| e.to_string())
}

/// Render schemes in the config format accepted by [`parse_schemes`].
pub fn format_schemes(schemes: &[CollectionScheme]) -> String {
    let mut out = String::new();
    for scheme in schemes {
        let side = |s: &[NeighborIndex]| {
            s.iter()
                .map(|i| i.value().to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        out.push_str(&format!(
            "{}: a={{{}}} b={{{}}}\n",
            scheme.id(),
            side(&scheme.side_a),
            side(&scheme.side_b)
        ));
    }
    out
}
