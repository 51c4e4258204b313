//! Image file codecs: PNG (via the `png` crate) and PNM (PPM P3/P6, PGM
//! P5) for loading color images and persisting edge and response maps.
//!
//! Only lossless 8-bit formats are accepted on input so test corpora stay
//! deterministic; response maps scale to 16-bit grayscale PNG or dump exact
//! values as CSV.

use crate::pipeline::{EdgeMap, PipelineError, ResponseMap, RgbImage};
use crate::vos::{ColorPixel, MAX_DISTANCE};
use std::fs;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum ImageIoError {
    #[error("file not found: {path}")]
    MissingFile { path: PathBuf },
    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("unsupported format for {path}: {detail}")]
    UnsupportedFormat { path: PathBuf, detail: String },
    #[error("malformed header in {path}: {detail}")]
    MalformedHeader { path: PathBuf, detail: String },
    #[error("truncated pixel data in {path}: expected {expected} {unit}, found {found}")]
    TruncatedData {
        path: PathBuf,
        expected: usize,
        found: usize,
        unit: &'static str,
    },
    #[error("malformed pixel data in {path}: {detail}")]
    MalformedData { path: PathBuf, detail: String },
    #[error("{path}: extension says {extension} but content is {magic}")]
    FormatMismatch {
        path: PathBuf,
        extension: &'static str,
        magic: &'static str,
    },
    #[error("png error on {path}: {source}")]
    Png {
        path: PathBuf,
        source: png::DecodingError,
    },
    #[error("png encoding error on {path}: {source}")]
    PngEncode {
        path: PathBuf,
        source: png::EncodingError,
    },
    #[error(transparent)]
    Pipeline(#[from] PipelineError),
}

/// On-disk formats the loader understands.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ImageFormat {
    Png,
    /// PPM, P3 (ASCII) or P6 (binary).
    Ppm,
    /// PGM, P5 (binary grayscale).
    Pgm,
}

impl ImageFormat {
    pub fn name(self) -> &'static str {
        match self {
            ImageFormat::Png => "png",
            ImageFormat::Ppm => "ppm",
            ImageFormat::Pgm => "pgm",
        }
    }

    fn from_extension(path: &Path) -> Option<ImageFormat> {
        match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
            "png" => Some(ImageFormat::Png),
            "ppm" => Some(ImageFormat::Ppm),
            "pgm" => Some(ImageFormat::Pgm),
            _ => None,
        }
    }

    fn from_magic(bytes: &[u8]) -> Option<ImageFormat> {
        const PNG_SIGNATURE: [u8; 8] = [0x89, b'P', b'N', b'G', b'\r', b'\n', 0x1A, b'\n'];
        if bytes.starts_with(&PNG_SIGNATURE) {
            Some(ImageFormat::Png)
        } else if bytes.starts_with(b"P3") || bytes.starts_with(b"P6") {
            Some(ImageFormat::Ppm)
        } else if bytes.starts_with(b"P5") {
            Some(ImageFormat::Pgm)
        } else {
            None
        }
    }
}

/// A probed image file: path plus the format agreed on by extension and
/// magic bytes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImageFile {
    path: PathBuf,
    format: ImageFormat,
}

impl ImageFile {
    /// Read the file and determine its format. The extension and the magic
    /// bytes must agree when both are recognized; the magic decides when the
    /// extension is unknown.
    pub fn probe(path: &Path) -> Result<(ImageFile, Vec<u8>), ImageIoError> {
        let bytes = read_file(path)?;
        let from_ext = ImageFormat::from_extension(path);
        let from_magic = ImageFormat::from_magic(&bytes);
        let format = match (from_ext, from_magic) {
            (Some(e), Some(m)) if e == m => m,
            (Some(e), Some(m)) => {
                return Err(ImageIoError::FormatMismatch {
                    path: path.to_path_buf(),
                    extension: e.name(),
                    magic: m.name(),
                })
            }
            (_, Some(m)) => m,
            (_, None) => {
                return Err(ImageIoError::UnsupportedFormat {
                    path: path.to_path_buf(),
                    detail: "content is not PNG, PPM (P3/P6) or PGM (P5)".into(),
                })
            }
        };
        Ok((
            ImageFile {
                path: path.to_path_buf(),
                format,
            },
            bytes,
        ))
    }

    pub fn path(&self) -> &Path {
        &self.path
    }

    pub fn format(&self) -> ImageFormat {
        self.format
    }
}

fn read_file(path: &Path) -> Result<Vec<u8>, ImageIoError> {
    fs::read(path).map_err(|source| {
        if source.kind() == std::io::ErrorKind::NotFound {
            ImageIoError::MissingFile {
                path: path.to_path_buf(),
            }
        } else {
            ImageIoError::Io {
                path: path.to_path_buf(),
                source,
            }
        }
    })
}

/// Load a color image. 8-bit PNG (grayscale, grayscale+alpha, RGB, RGBA)
/// and PNM (P3/P6 PPM, P5 PGM, maxval 255) are accepted; grayscale is
/// replicated to three channels and alpha is discarded.
pub fn load_image(path: impl AsRef<Path>) -> Result<RgbImage, ImageIoError> {
    let path = path.as_ref();
    let (file, bytes) = ImageFile::probe(path)?;
    match file.format() {
        ImageFormat::Png => decode_png(path, &bytes),
        ImageFormat::Ppm | ImageFormat::Pgm => decode_pnm(path, &bytes),
    }
}

/// Load an image and binarize it: a pixel is an edge iff any channel is
/// nonzero. Inverse of [`save_edge_map`].
pub fn load_edge_map(path: impl AsRef<Path>) -> Result<EdgeMap, ImageIoError> {
    let image = load_image(path)?;
    Ok(EdgeMap::from_fn(image.width(), image.height(), |x, y| {
        let p = image.get(x, y);
        p.r > 0.0 || p.g > 0.0 || p.b > 0.0
    }))
}

fn decode_png(path: &Path, bytes: &[u8]) -> Result<RgbImage, ImageIoError> {
    let mut decoder = png::Decoder::new(std::io::Cursor::new(bytes));
    decoder.set_transformations(png::Transformations::IDENTITY);
    let png_err = |source| ImageIoError::Png {
        path: path.to_path_buf(),
        source,
    };
    let mut reader = decoder.read_info().map_err(png_err)?;
    let info = reader.info();
    let color_type = info.color_type;
    let bit_depth = info.bit_depth;
    if bit_depth != png::BitDepth::Eight {
        return Err(ImageIoError::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: format!("only 8-bit PNG is supported, found {bit_depth:?}"),
        });
    }
    let channels = match color_type {
        png::ColorType::Grayscale => 1,
        png::ColorType::GrayscaleAlpha => 2,
        png::ColorType::Rgb => 3,
        png::ColorType::Rgba => 4,
        png::ColorType::Indexed => {
            return Err(ImageIoError::UnsupportedFormat {
                path: path.to_path_buf(),
                detail: "palette PNG is not supported".into(),
            })
        }
    };
    let buffer_size = reader
        .output_buffer_size()
        .ok_or_else(|| ImageIoError::MalformedHeader {
            path: path.to_path_buf(),
            detail: "image dimensions overflow".into(),
        })?;
    let mut buffer = vec![0u8; buffer_size];
    let frame = reader.next_frame(&mut buffer).map_err(png_err)?;
    let (width, height) = (frame.width, frame.height);
    let mut pixels = Vec::with_capacity(width as usize * height as usize);
    for chunk in buffer[..frame.buffer_size()].chunks_exact(channels) {
        let pixel = match channels {
            1 => ColorPixel::from_u8(chunk[0], chunk[0], chunk[0]),
            2 => ColorPixel::from_u8(chunk[0], chunk[0], chunk[0]),
            3 => ColorPixel::from_u8(chunk[0], chunk[1], chunk[2]),
            _ => ColorPixel::from_u8(chunk[0], chunk[1], chunk[2]),
        };
        pixels.push(pixel);
    }
    Ok(RgbImage::new(width, height, pixels)?)
}

struct PnmHeader {
    width: u32,
    height: u32,
    data_offset: usize,
}

/// Tokenizing cursor over a PNM header: whitespace separates tokens and `#`
/// starts a comment running to end of line.
struct PnmCursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> PnmCursor<'a> {
    fn skip_separators(&mut self) {
        while self.pos < self.bytes.len() {
            let b = self.bytes[self.pos];
            if b.is_ascii_whitespace() {
                self.pos += 1;
            } else if b == b'#' {
                while self.pos < self.bytes.len() && self.bytes[self.pos] != b'\n' {
                    self.pos += 1;
                }
            } else {
                break;
            }
        }
    }

    fn next_token(&mut self) -> Option<&'a [u8]> {
        self.skip_separators();
        let start = self.pos;
        while self.pos < self.bytes.len()
            && !self.bytes[self.pos].is_ascii_whitespace()
            && self.bytes[self.pos] != b'#'
        {
            self.pos += 1;
        }
        (self.pos > start).then(|| &self.bytes[start..self.pos])
    }
}

fn parse_pnm_header(path: &Path, bytes: &[u8]) -> Result<PnmHeader, ImageIoError> {
    let malformed = |detail: String| ImageIoError::MalformedHeader {
        path: path.to_path_buf(),
        detail,
    };
    let mut cursor = PnmCursor { bytes, pos: 2 };
    let mut field = |name: &str| -> Result<u64, ImageIoError> {
        let token = cursor
            .next_token()
            .ok_or_else(|| malformed(format!("missing {name}")))?;
        std::str::from_utf8(token)
            .ok()
            .and_then(|s| s.parse::<u64>().ok())
            .ok_or_else(|| {
                malformed(format!(
                    "invalid {name} token {:?}",
                    String::from_utf8_lossy(token)
                ))
            })
    };
    let width = field("width")?;
    let height = field("height")?;
    let maxval = field("maxval")?;
    if width == 0 || height == 0 || width > u64::from(u32::MAX) || height > u64::from(u32::MAX) {
        return Err(malformed(format!("invalid dimensions {width}x{height}")));
    }
    if maxval != 255 {
        return Err(ImageIoError::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: format!("only maxval 255 is supported, found {maxval}"),
        });
    }
    // Exactly one whitespace byte separates the maxval from the raster.
    let pos = cursor.pos;
    if pos >= bytes.len() || !bytes[pos].is_ascii_whitespace() {
        return Err(malformed("missing whitespace after maxval".into()));
    }
    Ok(PnmHeader {
        width: width as u32,
        height: height as u32,
        data_offset: pos + 1,
    })
}

fn decode_pnm(path: &Path, bytes: &[u8]) -> Result<RgbImage, ImageIoError> {
    let magic = &bytes[..2.min(bytes.len())];
    let header = parse_pnm_header(path, bytes)?;
    let count = header.width as usize * header.height as usize;
    let pixels = match magic {
        b"P3" => {
            let mut cursor = PnmCursor {
                bytes,
                pos: header.data_offset,
            };
            let mut samples = Vec::with_capacity(count * 3);
            while samples.len() < count * 3 {
                let Some(token) = cursor.next_token() else {
                    return Err(ImageIoError::TruncatedData {
                        path: path.to_path_buf(),
                        expected: count * 3,
                        found: samples.len(),
                        unit: "samples",
                    });
                };
                let value = std::str::from_utf8(token)
                    .ok()
                    .and_then(|s| s.parse::<u32>().ok())
                    .ok_or_else(|| ImageIoError::MalformedData {
                        path: path.to_path_buf(),
                        detail: format!("invalid sample {:?}", String::from_utf8_lossy(token)),
                    })?;
                if value > 255 {
                    return Err(ImageIoError::MalformedData {
                        path: path.to_path_buf(),
                        detail: format!("sample {value} exceeds maxval 255"),
                    });
                }
                samples.push(value as u8);
            }
            samples
                .chunks_exact(3)
                .map(|c| ColorPixel::from_u8(c[0], c[1], c[2]))
                .collect()
        }
        b"P6" => {
            let data = &bytes[header.data_offset.min(bytes.len())..];
            if data.len() < count * 3 {
                return Err(ImageIoError::TruncatedData {
                    path: path.to_path_buf(),
                    expected: count * 3,
                    found: data.len(),
                    unit: "bytes",
                });
            }
            data[..count * 3]
                .chunks_exact(3)
                .map(|c| ColorPixel::from_u8(c[0], c[1], c[2]))
                .collect()
        }
        b"P5" => {
            let data = &bytes[header.data_offset.min(bytes.len())..];
            if data.len() < count {
                return Err(ImageIoError::TruncatedData {
                    path: path.to_path_buf(),
                    expected: count,
                    found: data.len(),
                    unit: "bytes",
                });
            }
            data[..count]
                .iter()
                .map(|&g| ColorPixel::from_u8(g, g, g))
                .collect()
        }
        other => {
            return Err(ImageIoError::UnsupportedFormat {
                path: path.to_path_buf(),
                detail: format!("unknown PNM magic {:?}", String::from_utf8_lossy(other)),
            })
        }
    };
    Ok(RgbImage::new(header.width, header.height, pixels)?)
}

fn channel_to_u8(value: f64) -> u8 {
    value.round().clamp(0.0, 255.0) as u8
}

fn create_writer(path: &Path) -> Result<BufWriter<fs::File>, ImageIoError> {
    fs::File::create(path)
        .map(BufWriter::new)
        .map_err(|source| ImageIoError::Io {
            path: path.to_path_buf(),
            source,
        })
}

fn write_all(path: &Path, data: &[u8]) -> Result<(), ImageIoError> {
    fs::write(path, data).map_err(|source| ImageIoError::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Save a color image as 8-bit RGB PNG or binary PPM (P6), by extension.
/// Channels round to the nearest integer.
pub fn save_image(image: &RgbImage, path: impl AsRef<Path>) -> Result<(), ImageIoError> {
    let path = path.as_ref();
    let mut data = Vec::with_capacity(image.pixels().len() * 3);
    for p in image.pixels() {
        data.push(channel_to_u8(p.r));
        data.push(channel_to_u8(p.g));
        data.push(channel_to_u8(p.b));
    }
    match ImageFormat::from_extension(path) {
        Some(ImageFormat::Png) => write_png(
            path,
            image.width(),
            image.height(),
            png::ColorType::Rgb,
            &data,
        ),
        Some(ImageFormat::Ppm) => {
            let mut out = format!("P6\n{} {}\n255\n", image.width(), image.height()).into_bytes();
            out.extend_from_slice(&data);
            write_all(path, &out)
        }
        _ => Err(ImageIoError::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: "use a .png or .ppm extension".into(),
        }),
    }
}

/// Save an edge map as an 8-bit single-channel image (PNG or PGM P5 by
/// extension): edge pixels 255, the rest 0.
pub fn save_edge_map(map: &EdgeMap, path: impl AsRef<Path>) -> Result<(), ImageIoError> {
    let path = path.as_ref();
    let data: Vec<u8> = map
        .edges()
        .iter()
        .map(|&e| if e { 255 } else { 0 })
        .collect();
    match ImageFormat::from_extension(path) {
        Some(ImageFormat::Png) => write_png(
            path,
            map.width(),
            map.height(),
            png::ColorType::Grayscale,
            &data,
        ),
        Some(ImageFormat::Pgm) => {
            let mut out = format!("P5\n{} {}\n255\n", map.width(), map.height()).into_bytes();
            out.extend_from_slice(&data);
            write_all(path, &out)
        }
        _ => Err(ImageIoError::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: "use a .png or .pgm extension".into(),
        }),
    }
}

/// Save a response map. `.png` scales responses linearly from
/// [0, MAX_DISTANCE] to 16-bit grayscale, rounding half up; `.csv` writes
/// the exact values, one image row per line.
pub fn save_response_map(map: &ResponseMap, path: impl AsRef<Path>) -> Result<(), ImageIoError> {
    let path = path.as_ref();
    match path.extension().and_then(|e| e.to_str()) {
        Some(ext) if ext.eq_ignore_ascii_case("csv") => {
            let mut writer = create_writer(path)?;
            let io_err = |source| ImageIoError::Io {
                path: path.to_path_buf(),
                source,
            };
            for y in 0..map.height() {
                for x in 0..map.width() {
                    if x > 0 {
                        write!(writer, ",").map_err(io_err)?;
                    }
                    write!(writer, "{}", map.response(x, y)).map_err(io_err)?;
                }
                writeln!(writer).map_err(io_err)?;
            }
            writer.flush().map_err(io_err)
        }
        Some(ext) if ext.eq_ignore_ascii_case("png") => {
            let mut data = Vec::with_capacity(map.responses().len() * 2);
            for &r in map.responses() {
                let scaled = (r / MAX_DISTANCE * 65535.0 + 0.5)
                    .floor()
                    .clamp(0.0, 65535.0) as u16;
                data.extend_from_slice(&scaled.to_be_bytes());
            }
            write_png_16(path, map.width(), map.height(), &data)
        }
        _ => Err(ImageIoError::UnsupportedFormat {
            path: path.to_path_buf(),
            detail: "use a .png or .csv extension".into(),
        }),
    }
}

fn write_png(
    path: &Path,
    width: u32,
    height: u32,
    color: png::ColorType,
    data: &[u8],
) -> Result<(), ImageIoError> {
    let encode_err = |source| ImageIoError::PngEncode {
        path: path.to_path_buf(),
        source,
    };
    let writer = create_writer(path)?;
    let mut encoder = png::Encoder::new(writer, width, height);
    encoder.set_color(color);
    encoder.set_depth(png::BitDepth::Eight);
    let mut writer = encoder.write_header().map_err(encode_err)?;
    writer.write_image_data(data).map_err(encode_err)?;
    writer.finish().map_err(encode_err)
}

fn write_png_16(path: &Path, width: u32, height: u32, data: &[u8]) -> Result<(), ImageIoError> {
    let encode_err = |source| ImageIoError::PngEncode {
        path: path.to_path_buf(),
        source,
    };
    let writer = create_writer(path)?;
    let mut encoder = png::Encoder::new(writer, width, height);
    encoder.set_color(png::ColorType::Grayscale);
    encoder.set_depth(png::BitDepth::Sixteen);
    let mut writer = encoder.write_header().map_err(encode_err)?;
    writer.write_image_data(data).map_err(encode_err)?;
    writer.finish().map_err(encode_err)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::collection::SchemeId;
    use crate::pipeline::{ResponseMap, RgbImage};

    fn tmp(name: &str) -> PathBuf {
        let dir = tempfile::tempdir().unwrap();
        // Leak the dir so files survive for the duration of the test binary.
        let path = dir.path().join(name);
        std::mem::forget(dir);
        path
    }

    #[test]
    fn ppm_p3_literal_decode() {
        let path = tmp("two.ppm");
        fs::write(&path, "P3\n2 1\n255\n255 0 0 0 0 255\n").unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.width(), 2);
        assert_eq!(img.height(), 1);
        assert_eq!(img.get(0, 0), ColorPixel::from_u8(255, 0, 0));
        assert_eq!(img.get(1, 0), ColorPixel::from_u8(0, 0, 255));
    }

    #[test]
    fn ppm_header_comments_accepted() {
        let path = tmp("comment.ppm");
        fs::write(
            &path,
            "P3\n# a comment\n2 # inline\n1\n# another\n255\n1 2 3 4 5 6\n",
        )
        .unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.get(1, 0), ColorPixel::from_u8(4, 5, 6));
    }

    #[test]
    fn round_trip_ppm_and_png() {
        let img = RgbImage::from_fn(7, 5, |x, y| {
            ColorPixel::from_u8((x * 30) as u8, (y * 50) as u8, (x + y) as u8)
        })
        .unwrap();
        for name in ["rt.ppm", "rt.png"] {
            let path = tmp(name);
            save_image(&img, &path).unwrap();
            let back = load_image(&path).unwrap();
            assert_eq!(back, img, "round trip through {name}");
        }
    }

    #[test]
    fn maxval_65535_rejected() {
        let path = tmp("wide.ppm");
        fs::write(&path, "P3\n1 1\n65535\n0 0 0\n").unwrap();
        match load_image(&path) {
            Err(ImageIoError::UnsupportedFormat { .. }) => {}
            other => panic!("expected UnsupportedFormat, got {other:?}"),
        }
    }

    #[test]
    fn distinct_error_variants() {
        match load_image(Path::new("/nonexistent/j.ppm")) {
            Err(ImageIoError::MissingFile { path }) => {
                assert!(path.to_string_lossy().contains("j.ppm"))
            }
            other => panic!("expected MissingFile, got {other:?}"),
        }

        let bad_header = tmp("bad.ppm");
        fs::write(&bad_header, "P6\n-3 2\n255\n").unwrap();
        assert!(matches!(
            load_image(&bad_header),
            Err(ImageIoError::MalformedHeader { .. })
        ));

        let truncated = tmp("short.ppm");
        fs::write(&truncated, "P6\n2 2\n255\nabc").unwrap();
        assert!(matches!(
            load_image(&truncated),
            Err(ImageIoError::TruncatedData { .. })
        ));

        let truncated_ascii = tmp("short3.ppm");
        fs::write(&truncated_ascii, "P3\n2 2\n255\n1 2 3 4\n").unwrap();
        assert!(matches!(
            load_image(&truncated_ascii),
            Err(ImageIoError::TruncatedData { .. })
        ));

        let overflow = tmp("over.ppm");
        fs::write(&overflow, "P3\n1 1\n255\n300 0 0\n").unwrap();
        assert!(matches!(
            load_image(&overflow),
            Err(ImageIoError::MalformedData { .. })
        ));

        let garbage = tmp("noise.bin");
        fs::write(&garbage, [0xde, 0xad, 0xbe, 0xef]).unwrap();
        assert!(matches!(
            load_image(&garbage),
            Err(ImageIoError::UnsupportedFormat { .. })
        ));
    }

    #[test]
    fn extension_and_magic_must_agree() {
        let path = tmp("lies.png");
        fs::write(&path, "P6\n1 1\n255\nabc").unwrap();
        match load_image(&path) {
            Err(ImageIoError::FormatMismatch {
                extension, magic, ..
            }) => {
                assert_eq!(extension, "png");
                assert_eq!(magic, "ppm");
            }
            other => panic!("expected FormatMismatch, got {other:?}"),
        }
    }

    #[test]
    fn magic_alone_suffices_for_unknown_extension() {
        let path = tmp("payload.dat");
        fs::write(&path, "P3\n1 1\n255\n9 8 7\n").unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.get(0, 0), ColorPixel::from_u8(9, 8, 7));
    }

    #[test]
    fn edge_map_round_trip() {
        let mut em = EdgeMap::new_empty(5, 4);
        em.set_edge(1, 2, true);
        em.set_edge(4, 0, true);
        for name in ["edges.pgm", "edges.png"] {
            let path = tmp(name);
            save_edge_map(&em, &path).unwrap();
            let back = load_edge_map(&path).unwrap();
            assert_eq!(back, em, "round trip through {name}");
        }
    }

    #[test]
    fn edge_map_extremes_as_rasters() {
        let empty = EdgeMap::new_empty(3, 3);
        let path = tmp("empty.pgm");
        save_edge_map(&empty, &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        let raster = &bytes[bytes.len() - 9..];
        assert!(raster.iter().all(|&b| b == 0));

        let full = EdgeMap::from_fn(3, 3, |_, _| true);
        let path = tmp("full.pgm");
        save_edge_map(&full, &path).unwrap();
        let bytes = fs::read(&path).unwrap();
        let raster = &bytes[bytes.len() - 9..];
        assert!(raster.iter().all(|&b| b == 255));
    }

    fn read_png_16(path: &Path) -> Vec<u16> {
        let bytes = fs::read(path).unwrap();
        let mut reader = png::Decoder::new(std::io::Cursor::new(&bytes[..]))
            .read_info()
            .unwrap();
        let mut buffer = vec![0u8; reader.output_buffer_size().unwrap()];
        let frame = reader.next_frame(&mut buffer).unwrap();
        buffer[..frame.buffer_size()]
            .chunks_exact(2)
            .map(|c| u16::from_be_bytes([c[0], c[1]]))
            .collect()
    }

    #[test]
    fn response_map_png_scaling() {
        let responses = vec![0.0, MAX_DISTANCE, 220.8365, 0.0];
        let map = ResponseMap::new(4, 1, responses, vec![SchemeId::N; 4]).unwrap();
        let path = tmp("resp.png");
        save_response_map(&map, &path).unwrap();
        let values = read_png_16(&path);
        assert_eq!(values, vec![0, 65535, 32768, 0]);
    }

    #[test]
    fn response_map_csv_exact() {
        let responses = vec![0.0, 1.5, 300.125, MAX_DISTANCE];
        let map = ResponseMap::new(2, 2, responses, vec![SchemeId::N; 4]).unwrap();
        let path = tmp("resp.csv");
        save_response_map(&map, &path).unwrap();
        let text = fs::read_to_string(&path).unwrap();
        assert_eq!(text, format!("0,1.5\n300.125,{MAX_DISTANCE}\n"));
    }

    #[test]
    fn png_gray_and_alpha_variants_load() {
        // 8-bit grayscale PNG becomes replicated channels.
        let path = tmp("gray.png");
        write_png(&path, 2, 1, png::ColorType::Grayscale, &[7, 250]).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.get(0, 0), ColorPixel::from_u8(7, 7, 7));
        assert_eq!(img.get(1, 0), ColorPixel::from_u8(250, 250, 250));

        // Alpha is discarded.
        let path = tmp("rgba.png");
        write_png(&path, 1, 1, png::ColorType::Rgba, &[10, 20, 30, 128]).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.get(0, 0), ColorPixel::from_u8(10, 20, 30));

        let path = tmp("graya.png");
        write_png(&path, 2, 1, png::ColorType::GrayscaleAlpha, &[60, 0, 61, 255]).unwrap();
        let img = load_image(&path).unwrap();
        assert_eq!(img.get(0, 0), ColorPixel::from_u8(60, 60, 60));
        assert_eq!(img.get(1, 0), ColorPixel::from_u8(61, 61, 61));
    }

    #[test]
    fn sixteen_bit_png_rejected_on_load() {
        let path = tmp("deep.png");
        let map = ResponseMap::new(1, 1, vec![100.0], vec![SchemeId::N]).unwrap();
        save_response_map(&map, &path).unwrap();
        assert!(matches!(
            load_image(&path),
            Err(ImageIoError::UnsupportedFormat { .. })
        ));
    }
}
