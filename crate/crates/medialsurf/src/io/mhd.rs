//! MetaImage (.mhd/.mha) volume reader and writer.
//!
//! Text header with `Key = Value` lines, raw little-endian payload in
//! x-fastest order. Payload lives either in a sibling file named by
//! `ElementDataFile` or inline after the header (`ElementDataFile = LOCAL`).

use crate::grid::VoxelGrid;
use crate::{Error, Result};
use byteorder::{LittleEndian, ReadBytesExt, WriteBytesExt};
use std::io::{BufWriter, Cursor, Write};
use std::path::Path;

/// Supported MetaImage element types.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ElementType {
    UChar,
    UShort,
    Float,
}

impl ElementType {
    fn name(self) -> &'static str {
        match self {
            ElementType::UChar => "MET_UCHAR",
            ElementType::UShort => "MET_USHORT",
            ElementType::Float => "MET_FLOAT",
        }
    }

    fn byte_size(self) -> usize {
        match self {
            ElementType::UChar => 1,
            ElementType::UShort => 2,
            ElementType::Float => 4,
        }
    }
}

fn parse_err(path: &Path, message: impl Into<String>) -> Error {
    Error::Parse {
        path: path.display().to_string(),
        message: message.into(),
    }
}

/// Read a MetaImage volume into a [`VoxelGrid`].
pub fn read_mhd(path: impl AsRef<Path>) -> Result<VoxelGrid> {
    let path = path.as_ref();
    let bytes = std::fs::read(path)?;

    // Header is ASCII lines up to (and including) the ElementDataFile key.
    let mut dims: Option<[usize; 3]> = None;
    let mut spacing = [1.0f64; 3];
    let mut origin = [0.0f64; 3];
    let mut elem: Option<ElementType> = None;
    let mut data_file: Option<String> = None;
    let mut header_len = 0usize;
    let mut msb = false;

    let mut line_start = 0usize;
    while line_start < bytes.len() {
        let line_end = bytes[line_start..]
            .iter()
            .position(|&b| b == b'\n')
            .map(|p| line_start + p)
            .unwrap_or(bytes.len());
        let raw = &bytes[line_start..line_end];
        let line = std::str::from_utf8(raw)
            .map_err(|_| parse_err(path, "non-ASCII header line"))?
            .trim();
        let next = line_end + 1;
        if let Some((key, value)) = line.split_once('=') {
            let key = key.trim();
            let value = value.trim();
            match key {
                "ObjectType" => {
                    if value != "Image" {
                        return Err(parse_err(path, format!("ObjectType {value} unsupported")));
                    }
                }
                "NDims" => {
                    if value != "3" {
                        return Err(parse_err(path, format!("NDims {value}, expected 3")));
                    }
                }
                "DimSize" => {
                    let v = parse_triplet::<usize>(value)
                        .ok_or_else(|| parse_err(path, "bad DimSize"))?;
                    dims = Some(v);
                }
                "ElementSpacing" | "ElementSize" => {
                    spacing = parse_triplet::<f64>(value)
                        .ok_or_else(|| parse_err(path, "bad ElementSpacing"))?;
                }
                "Offset" | "Origin" | "Position" => {
                    origin = parse_triplet::<f64>(value)
                        .ok_or_else(|| parse_err(path, "bad Offset"))?;
                }
                "ElementType" => {
                    elem = Some(match value {
                        "MET_UCHAR" => ElementType::UChar,
                        "MET_USHORT" => ElementType::UShort,
                        "MET_FLOAT" => ElementType::Float,
                        other => {
                            return Err(parse_err(path, format!("ElementType {other} unsupported")))
                        }
                    });
                }
                "BinaryDataByteOrderMSB" | "ElementByteOrderMSB" => {
                    msb = value.eq_ignore_ascii_case("true");
                }
                "CompressedData" => {
                    if value.eq_ignore_ascii_case("true") {
                        return Err(Error::Unsupported("compressed MetaImage payload".into()));
                    }
                }
                "ElementDataFile" => {
                    data_file = Some(value.to_string());
                    header_len = next;
                    break;
                }
                // TransformMatrix, CenterOfRotation, AnatomicalOrientation, ...
                _ => {}
            }
        }
        line_start = next;
        header_len = next;
    }

    if msb {
        return Err(Error::Unsupported("big-endian MetaImage payload".into()));
    }
    let dims = dims.ok_or_else(|| parse_err(path, "missing DimSize"))?;
    let elem = elem.ok_or_else(|| parse_err(path, "missing ElementType"))?;
    let data_file = data_file.ok_or_else(|| parse_err(path, "missing ElementDataFile"))?;

    let n = dims[0] * dims[1] * dims[2];
    let payload: Vec<u8> = if data_file == "LOCAL" {
        bytes[header_len.min(bytes.len())..].to_vec()
    } else {
        let dir = path.parent().unwrap_or_else(|| Path::new("."));
        std::fs::read(dir.join(&data_file))?
    };
    if payload.len() < n * elem.byte_size() {
        return Err(parse_err(
            path,
            format!(
                "payload too small: {} bytes for {n} x {} elements",
                payload.len(),
                elem.byte_size()
            ),
        ));
    }

    let mut cur = Cursor::new(&payload);
    let mut data = Vec::with_capacity(n);
    match elem {
        ElementType::UChar => {
            for _ in 0..n {
                data.push(cur.read_u8()? as f64);
            }
        }
        ElementType::UShort => {
            for _ in 0..n {
                data.push(cur.read_u16::<LittleEndian>()? as f64);
            }
        }
        ElementType::Float => {
            for _ in 0..n {
                let v = cur.read_f32::<LittleEndian>()? as f64;
                if !v.is_finite() {
                    return Err(Error::NonFinite("MetaImage payload"));
                }
                data.push(v);
            }
        }
    }
    VoxelGrid::from_data(dims, spacing, origin, data)
}

fn parse_triplet<T: std::str::FromStr>(s: &str) -> Option<[T; 3]> {
    let mut it = s.split_whitespace();
    let a = it.next()?.parse().ok()?;
    let b = it.next()?.parse().ok()?;
    let c = it.next()?.parse().ok()?;
    if it.next().is_some() {
        return None;
    }
    Some([a, b, c])
}

/// Write a grid as an `.mhd` header plus sibling `.raw` payload.
///
/// Values are converted to the requested element type; integer types error
/// when a value does not fit.
pub fn write_mhd(path: impl AsRef<Path>, grid: &VoxelGrid, elem: ElementType) -> Result<()> {
    let path = path.as_ref();
    let raw_path = path.with_extension("raw");
    let raw_name = raw_path
        .file_name()
        .ok_or_else(|| Error::InvalidArgument("output path has no file name".into()))?
        .to_string_lossy()
        .to_string();

    let dims = grid.dims();
    let sp = grid.spacing();
    let org = grid.origin();
    let header = format!(
        "ObjectType = Image\n\
         NDims = 3\n\
         BinaryData = True\n\
         BinaryDataByteOrderMSB = False\n\
         CompressedData = False\n\
         DimSize = {} {} {}\n\
         ElementSpacing = {} {} {}\n\
         Offset = {} {} {}\n\
         ElementType = {}\n\
         ElementDataFile = {}\n",
        dims[0], dims[1], dims[2], sp[0], sp[1], sp[2], org[0], org[1], org[2],
        elem.name(),
        raw_name
    );
    std::fs::write(path, header)?;

    let file = std::fs::File::create(&raw_path)?;
    let mut w = BufWriter::new(file);
    match elem {
        ElementType::UChar => {
            for &v in grid.data() {
                if !(0.0..=255.0).contains(&v) || v.fract() != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "value {v} does not fit MET_UCHAR"
                    )));
                }
                w.write_u8(v as u8)?;
            }
        }
        ElementType::UShort => {
            for &v in grid.data() {
                if !(0.0..=65535.0).contains(&v) || v.fract() != 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "value {v} does not fit MET_USHORT"
                    )));
                }
                w.write_u16::<LittleEndian>(v as u16)?;
            }
        }
        ElementType::Float => {
            for &v in grid.data() {
                w.write_f32::<LittleEndian>(v as f32)?;
            }
        }
    }
    w.flush()?;
    Ok(())
}
