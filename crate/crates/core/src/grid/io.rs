//! Grid-function files: a JSON header next to a flat data file.
//!
//! The header holds `{dim, halfwidth, points_per_axis}` plus the name and
//! format of the data file. Binary data is little-endian `f64`; CSV data is one
//! value per line in shortest round-trip notation. Both round-trip bit-exactly.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::{GridFunction, GridSpec};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DataFormat {
    Bin,
    Csv,
}

impl DataFormat {
    fn extension(self) -> &'static str {
        match self {
            DataFormat::Bin => "bin",
            DataFormat::Csv => "csv",
        }
    }
}

#[derive(Serialize, Deserialize)]
struct Header {
    dim: usize,
    halfwidth: f64,
    points_per_axis: usize,
    #[serde(default)]
    format: Option<DataFormat>,
    #[serde(default)]
    data: Option<String>,
}

impl GridFunction {
    /// Encodes the values alone.
    pub fn encode_values(&self, format: DataFormat) -> Vec<u8> {
        match format {
            DataFormat::Bin => self.values().iter().flat_map(|v| v.to_le_bytes()).collect(),
            DataFormat::Csv => {
                let mut s = String::with_capacity(self.len() * 20);
                for v in self.values() {
                    s.push_str(&format!("{v:?}\n"));
                }
                s.into_bytes()
            }
        }
    }

    /// Decodes values written by [`GridFunction::encode_values`].
    pub fn decode_values(spec: GridSpec, bytes: &[u8], format: DataFormat) -> Result<GridFunction> {
        let values = match format {
            DataFormat::Bin => {
                if !bytes.len().is_multiple_of(8) {
                    return Err(Error::Parse(format!("binary length {} not a multiple of 8", bytes.len())));
                }
                bytes
                    .chunks_exact(8)
                    .map(|c| f64::from_le_bytes(c.try_into().expect("chunk of 8")))
                    .collect()
            }
            DataFormat::Csv => {
                let text = std::str::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))?;
                text.split(['\n', ','])
                    .map(str::trim)
                    .filter(|t| !t.is_empty())
                    .map(|t| t.parse::<f64>().map_err(|e| Error::Parse(format!("{t:?}: {e}"))))
                    .collect::<Result<Vec<_>>>()?
            }
        };
        GridFunction::new(spec, values)
    }

    /// Writes `header_path` (JSON) and a sibling data file with the same stem.
    pub fn save(&self, header_path: impl AsRef<Path>, format: DataFormat) -> Result<PathBuf> {
        let header_path = header_path.as_ref();
        let data_path = header_path.with_extension(format.extension());
        let data_name = data_path
            .file_name()
            .and_then(|s| s.to_str())
            .ok_or_else(|| Error::Parse(format!("bad path {}", header_path.display())))?
            .to_string();
        let spec = self.spec();
        let header = Header {
            dim: spec.dim(),
            halfwidth: spec.halfwidth(),
            points_per_axis: spec.points_per_axis(),
            format: Some(format),
            data: Some(data_name),
        };
        fs::write(&data_path, self.encode_values(format))?;
        fs::write(header_path, serde_json::to_vec_pretty(&header)?)?;
        Ok(data_path)
    }

    /// Reads a header written by [`GridFunction::save`]. Without a `data`
    /// field, a sibling `.bin` and then `.csv` file is tried.
    pub fn load(header_path: impl AsRef<Path>) -> Result<GridFunction> {
        let header_path = header_path.as_ref();
        let header: Header = serde_json::from_slice(&fs::read(header_path)?)?;
        let spec = GridSpec::new(header.dim, header.halfwidth, header.points_per_axis)?;
        let dir = header_path.parent().unwrap_or_else(|| Path::new("."));
        let (path, format) = match (header.data, header.format) {
            (Some(name), fmt) => {
                let p = dir.join(&name);
                let f = fmt.unwrap_or(if name.ends_with(".csv") { DataFormat::Csv } else { DataFormat::Bin });
                (p, f)
            }
            (None, fmt) => {
                let candidates = match fmt {
                    Some(f) => vec![f],
                    None => vec![DataFormat::Bin, DataFormat::Csv],
                };
                candidates
                    .into_iter()
                    .map(|f| (header_path.with_extension(f.extension()), f))
                    .find(|(p, _)| p.exists())
                    .ok_or_else(|| Error::Parse(format!("no data file next to {}", header_path.display())))?
            }
        };
        GridFunction::decode_values(spec, &fs::read(path)?, format)
    }
}
