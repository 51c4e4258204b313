//! Python extension module exposing the vos-edge types and operations.
//!
//! Build with `cargo build -p vos-edge-py --release`, then rename
//! `libvos_edge_py.so` to `vos_edge.so` somewhere on `sys.path` (the
//! `python/smoke_test.py` script automates this).

use pyo3::exceptions::{PyIOError, PyValueError};
use pyo3::prelude::*;
use pyo3::types::PyBytes;
use vos_edge::pipeline as core_pipeline;
use vos_edge::{
    BorderPolicy, ColorPixel, Operator, PipelineConfig, StepOrientation, ThresholdMode,
};

fn value_error(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn io_error(e: impl std::fmt::Display) -> PyErr {
    PyIOError::new_err(e.to_string())
}

fn color_from_tuple(rgb: (u8, u8, u8)) -> ColorPixel {
    ColorPixel::from_u8(rgb.0, rgb.1, rgb.2)
}

/// Row-major 8-bit RGB image.
#[pyclass(name = "RgbImage", frozen)]
struct PyRgbImage {
    inner: core_pipeline::RgbImage,
}

#[pymethods]
impl PyRgbImage {
    /// Build from packed RGB bytes (3 bytes per pixel, row-major).
    #[new]
    fn new(width: u32, height: u32, data: &[u8]) -> PyResult<Self> {
        let expected = width as usize * height as usize * 3;
        if data.len() != expected {
            return Err(PyValueError::new_err(format!(
                "expected {expected} bytes for {width}x{height} RGB, got {}",
                data.len()
            )));
        }
        let pixels = data
            .chunks_exact(3)
            .map(|c| ColorPixel::from_u8(c[0], c[1], c[2]))
            .collect();
        let inner = core_pipeline::RgbImage::new(width, height, pixels).map_err(value_error)?;
        Ok(Self { inner })
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.height()
    }

    /// Packed RGB bytes, channels rounded to the nearest integer.
    fn to_raw<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        let mut data = Vec::with_capacity(self.inner.pixels().len() * 3);
        for p in self.inner.pixels() {
            data.push(p.r.round().clamp(0.0, 255.0) as u8);
            data.push(p.g.round().clamp(0.0, 255.0) as u8);
            data.push(p.b.round().clamp(0.0, 255.0) as u8);
        }
        PyBytes::new(py, &data)
    }

    /// Pixel at (x, y) as an (r, g, b) float tuple.
    fn pixel(&self, x: u32, y: u32) -> PyResult<(f64, f64, f64)> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyValueError::new_err(format!(
                "({x}, {y}) is outside a {}x{} image",
                self.inner.width(),
                self.inner.height()
            )));
        }
        let p = self.inner.get(x, y);
        Ok((p.r, p.g, p.b))
    }

    /// Write as PNG or binary PPM, chosen by extension.
    fn save(&self, path: &str) -> PyResult<()> {
        vos_edge::save_image(&self.inner, path).map_err(io_error)
    }

    fn __repr__(&self) -> String {
        format!("RgbImage({}x{})", self.inner.width(), self.inner.height())
    }
}

/// Binary edge map.
#[pyclass(name = "EdgeMap", frozen)]
struct PyEdgeMap {
    inner: core_pipeline::EdgeMap,
}

#[pymethods]
impl PyEdgeMap {
    /// Build from one byte per pixel; nonzero means edge.
    #[new]
    fn new(width: u32, height: u32, data: &[u8]) -> PyResult<Self> {
        let expected = width as usize * height as usize;
        if data.len() != expected {
            return Err(PyValueError::new_err(format!(
                "expected {expected} bytes for {width}x{height}, got {}",
                data.len()
            )));
        }
        let inner = core_pipeline::EdgeMap::from_fn(width, height, |x, y| {
            data[y as usize * width as usize + x as usize] != 0
        });
        Ok(Self { inner })
    }

    #[getter]
    fn width(&self) -> u32 {
        self.inner.width()
    }

    #[getter]
    fn height(&self) -> u32 {
        self.inner.height()
    }

    /// One byte per pixel: 255 for edges, 0 otherwise.
    fn to_raw<'py>(&self, py: Python<'py>) -> Bound<'py, PyBytes> {
        let data: Vec<u8> = self
            .inner
            .edges()
            .iter()
            .map(|&e| if e { 255 } else { 0 })
            .collect();
        PyBytes::new(py, &data)
    }

    fn is_edge(&self, x: u32, y: u32) -> PyResult<bool> {
        if x >= self.inner.width() || y >= self.inner.height() {
            return Err(PyValueError::new_err(format!(
                "({x}, {y}) is outside a {}x{} map",
                self.inner.width(),
                self.inner.height()
            )));
        }
        Ok(self.inner.is_edge(x, y))
    }

    fn edge_count(&self) -> usize {
        self.inner.edge_count()
    }

    /// Write as 8-bit grayscale PNG or PGM, chosen by extension.
    fn save(&self, path: &str) -> PyResult<()> {
        vos_edge::save_edge_map(&self.inner, path).map_err(io_error)
    }

    fn __repr__(&self) -> String {
        format!(
            "EdgeMap({}x{}, {} edges)",
            self.inner.width(),
            self.inner.height(),
            self.inner.edge_count()
        )
    }
}

fn build_config(
    operator: &str,
    k: usize,
    threshold: Option<f64>,
    percentile: Option<f64>,
    nms: bool,
    border: &str,
) -> PyResult<PipelineConfig> {
    let operator: Operator = operator.parse().map_err(PyValueError::new_err)?;
    let border: BorderPolicy = border.parse().map_err(PyValueError::new_err)?;
    let threshold = match (threshold, percentile) {
        (Some(_), Some(_)) => {
            return Err(PyValueError::new_err(
                "threshold and percentile are mutually exclusive",
            ))
        }
        (Some(t), None) => ThresholdMode::Fixed(t),
        (None, Some(p)) => ThresholdMode::Percentile(p),
        (None, None) => ThresholdMode::Otsu,
    };
    let config = PipelineConfig {
        operator,
        k,
        threshold,
        nms,
        border,
    };
    config.validate().map_err(value_error)?;
    Ok(config)
}

/// Run the full detector. `threshold=None` with `percentile=None` selects
/// Otsu's method.
#[pyfunction]
#[pyo3(signature = (image, operator="mvr", k=3, threshold=None, percentile=None, nms=true, border="replicate"))]
#[allow(clippy::too_many_arguments)]
fn detect_edges(
    image: &PyRgbImage,
    operator: &str,
    k: usize,
    threshold: Option<f64>,
    percentile: Option<f64>,
    nms: bool,
    border: &str,
) -> PyResult<PyEdgeMap> {
    let config = build_config(operator, k, threshold, percentile, nms, border)?;
    let inner = vos_edge::detect_edges(&image.inner, &config).map_err(value_error)?;
    Ok(PyEdgeMap { inner })
}

/// Per-pixel operator responses (row-major floats) plus direction labels.
#[pyfunction]
#[pyo3(signature = (image, operator="mvr", k=3, nms=true, border="replicate"))]
fn response_map(
    image: &PyRgbImage,
    operator: &str,
    k: usize,
    nms: bool,
    border: &str,
) -> PyResult<(Vec<f64>, Vec<String>)> {
    let config = build_config(operator, k, None, None, nms, border)?;
    let mut map =
        core_pipeline::compute_response_map(&image.inner, &config).map_err(value_error)?;
    if nms {
        map = core_pipeline::non_max_suppression(&map);
    }
    let directions = map
        .directions()
        .iter()
        .map(|d| d.as_str().to_string())
        .collect();
    Ok((map.responses().to_vec(), directions))
}

/// Two half-planes with a one-pixel ground-truth boundary on the
/// `color_b` side.
#[pyfunction]
#[pyo3(signature = (width=64, height=64, color_a=(255, 0, 0), color_b=(0, 0, 255), orientation="vertical"))]
fn step_image(
    width: u32,
    height: u32,
    color_a: (u8, u8, u8),
    color_b: (u8, u8, u8),
    orientation: &str,
) -> PyResult<(PyRgbImage, PyEdgeMap)> {
    let orientation: StepOrientation = orientation.parse().map_err(PyValueError::new_err)?;
    let (image, truth) = vos_edge::generate_step_image(
        width,
        height,
        color_from_tuple(color_a),
        color_from_tuple(color_b),
        orientation,
    )
    .map_err(value_error)?;
    Ok((
        PyRgbImage { inner: image },
        PyEdgeMap {
            inner: truth.into_edge_map(),
        },
    ))
}

/// Filled disk on a contrasting background with its discrete-circle
/// ground truth.
#[pyfunction]
#[pyo3(signature = (size=64, radius=20, color_a=(255, 0, 0), color_b=(0, 0, 255)))]
fn disk_image(
    size: u32,
    radius: u32,
    color_a: (u8, u8, u8),
    color_b: (u8, u8, u8),
) -> PyResult<(PyRgbImage, PyEdgeMap)> {
    let (image, truth) = vos_edge::generate_disk_image(
        size,
        radius,
        color_from_tuple(color_a),
        color_from_tuple(color_b),
    )
    .map_err(value_error)?;
    Ok((
        PyRgbImage { inner: image },
        PyEdgeMap {
            inner: truth.into_edge_map(),
        },
    ))
}

/// Seeded salt-and-pepper noise at the given rate.
#[pyfunction]
fn salt_pepper(image: &PyRgbImage, rate: f64, seed: u64) -> PyResult<PyRgbImage> {
    let inner = vos_edge::salt_pepper(&image.inner, rate, seed).map_err(value_error)?;
    Ok(PyRgbImage { inner })
}

/// Pratt figure of merit of `detected` against `truth`, in [0, 1].
#[pyfunction]
#[pyo3(signature = (detected, truth, alpha=vos_edge::PRATT_ALPHA))]
fn pratt_fom(detected: &PyEdgeMap, truth: &PyEdgeMap, alpha: f64) -> PyResult<f64> {
    vos_edge::pratt_fom(&detected.inner, &truth.inner, alpha).map_err(value_error)
}

/// Edge pixels with exactly one edge neighbor.
#[pyfunction]
fn endpoint_count(map: &PyEdgeMap) -> usize {
    vos_edge::endpoint_count(&map.inner)
}

/// Number of 8-connected edge components.
#[pyfunction]
fn connected_components(map: &PyEdgeMap) -> usize {
    vos_edge::connected_components(&map.inner)
}

/// Load a PNG/PPM/PGM file as a color image.
#[pyfunction]
fn load_image(path: &str) -> PyResult<PyRgbImage> {
    let inner = vos_edge::load_image(path).map_err(io_error)?;
    Ok(PyRgbImage { inner })
}

/// Load an image file as a binary edge map (nonzero means edge).
#[pyfunction]
fn load_edge_map(path: &str) -> PyResult<PyEdgeMap> {
    let inner = vos_edge::load_edge_map(path).map_err(io_error)?;
    Ok(PyEdgeMap { inner })
}

#[pymodule]
#[pyo3(name = "vos_edge")]
fn vos_edge_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyRgbImage>()?;
    m.add_class::<PyEdgeMap>()?;
    m.add_function(wrap_pyfunction!(detect_edges, m)?)?;
    m.add_function(wrap_pyfunction!(response_map, m)?)?;
    m.add_function(wrap_pyfunction!(step_image, m)?)?;
    m.add_function(wrap_pyfunction!(disk_image, m)?)?;
    m.add_function(wrap_pyfunction!(salt_pepper, m)?)?;
    m.add_function(wrap_pyfunction!(pratt_fom, m)?)?;
    m.add_function(wrap_pyfunction!(endpoint_count, m)?)?;
    m.add_function(wrap_pyfunction!(connected_components, m)?)?;
    m.add_function(wrap_pyfunction!(load_image, m)?)?;
    m.add_function(wrap_pyfunction!(load_edge_map, m)?)?;
    m.add("MAX_DISTANCE", vos_edge::MAX_DISTANCE)?;
    m.add("PRATT_ALPHA", vos_edge::PRATT_ALPHA)?;
    Ok(())
}
