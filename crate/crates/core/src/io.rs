//! Instance and result files.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::geom::{Point, SimplePolygon};

/// A polygon with two query points.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Instance {
    pub name: String,
    pub polygon: Vec<Point>,
    pub s: Point,
    pub t: Point,
}

impl Instance {
    pub fn new(name: impl Into<String>, polygon: Vec<Point>, s: Point, t: Point) -> Self {
        Instance {
            name: name.into(),
            polygon,
            s,
            t,
        }
    }

    pub fn simple_polygon(&self) -> Result<SimplePolygon> {
        Ok(SimplePolygon::new(self.polygon.clone())?)
    }

    pub fn swapped(&self) -> Self {
        Instance {
            name: format!("{}-swapped", self.name),
            polygon: self.polygon.clone(),
            s: self.t,
            t: self.s,
        }
    }
}

/// Writes through a temporary file in the same directory and renames it
/// into place.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> std::io::Result<()> {
    let dir = path.parent().filter(|d| !d.as_os_str().is_empty());
    let name = path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "out".into());
    let tmp_name = format!(".{name}.tmp{}", std::process::id());
    let tmp = match dir {
        Some(d) => d.join(tmp_name),
        None => Path::new(&tmp_name).to_path_buf(),
    };
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
    }
    fs::rename(&tmp, path)
}

/// Pretty JSON with a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable value");
    s.push('\n');
    s
}
