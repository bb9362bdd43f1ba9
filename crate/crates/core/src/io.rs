//! CSV and JSON writers. Every number is written with 17 significant
//! digits so doubles survive a round trip exactly.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::Serialize;

/// Output format of the data commands.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

pub const SCHEMA_VERSION: u32 = 1;

/// `v` with 17 significant digits, e.g. `6.2927084129295274e-1`.
pub fn fmt_num(v: f64) -> String {
    if v.is_finite() {
        format!("{v:.16e}")
    } else {
        // not representable in JSON; CSV readers understand these
        format!("{v}")
    }
}

/// Pretty JSON in which every float carries 17 significant digits.
pub fn to_json<T: Serialize + ?Sized>(value: &T) -> io::Result<String> {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, FixedFloats::default());
    value.serialize(&mut ser).map_err(io::Error::other)?;
    String::from_utf8(buf).map_err(io::Error::other)
}

#[derive(Default)]
struct FixedFloats(serde_json::ser::PrettyFormatter<'static>);

impl serde_json::ser::Formatter for FixedFloats {
    fn write_f64<W: ?Sized + Write>(&mut self, w: &mut W, v: f64) -> io::Result<()> {
        w.write_all(fmt_num(v).as_bytes())
    }

    fn write_f32<W: ?Sized + Write>(&mut self, w: &mut W, v: f32) -> io::Result<()> {
        self.write_f64(w, v as f64)
    }

    fn begin_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_array(w)
    }

    fn end_array<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array(w)
    }

    fn begin_array_value<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_array_value(w, first)
    }

    fn end_array_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_array_value(w)
    }

    fn begin_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object(w)
    }

    fn end_object<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object(w)
    }

    fn begin_object_key<W: ?Sized + Write>(&mut self, w: &mut W, first: bool) -> io::Result<()> {
        self.0.begin_object_key(w, first)
    }

    fn begin_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.begin_object_value(w)
    }

    fn end_object_value<W: ?Sized + Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.0.end_object_value(w)
    }
}

/// Opens `path` for writing, or standard output when `path` is `None`.
pub fn sink(path: Option<&Path>) -> io::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

/// Path of the JSON sidecar that accompanies a CSV file: `<out>.json`.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

pub fn write_csv<W: Write>(w: &mut W, columns: &[&str], rows: impl IntoIterator<Item = Vec<f64>>) -> io::Result<()> {
    writeln!(w, "{}", columns.join(","))?;
    for row in rows {
        let line: Vec<String> = row.into_iter().map(fmt_num).collect();
        writeln!(w, "{}", line.join(","))?;
    }
    w.flush()
}

/// `{"schema_version": .., "config": .., "columns": [..], "rows": [[..], ..]}`
/// with rows written in the same fixed notation as the CSV output.
pub fn write_json_table<W: Write, C: Serialize>(
    w: &mut W,
    config: &C,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> io::Result<()> {
    let config = to_json(config)?;
    let columns = serde_json::to_string(columns).map_err(io::Error::other)?;
    write!(
        w,
        "{{\"schema_version\":{SCHEMA_VERSION},\"config\":{config},\"columns\":{columns},\"rows\":["
    )?;
    for (i, row) in rows.into_iter().enumerate() {
        let cells: Vec<String> = row.into_iter().map(json_num).collect();
        if i > 0 {
            write!(w, ",")?;
        }
        write!(w, "\n[{}]", cells.join(","))?;
    }
    writeln!(w, "\n]}}")?;
    w.flush()
}

fn json_num(v: f64) -> String {
    if v.is_finite() {
        fmt_num(v)
    } else {
        "null".into()
    }
}

/// Writes a table in the requested format. CSV output to a file gets a
/// sidecar carrying `config`.
pub fn emit_table<C: Serialize>(
    out: Option<&Path>,
    format: Format,
    config: &C,
    columns: &[&str],
    rows: impl IntoIterator<Item = Vec<f64>>,
) -> io::Result<()> {
    let mut w = sink(out)?;
    match format {
        Format::Csv => {
            write_csv(&mut w, columns, rows)?;
            if let Some(path) = out {
                let side = serde_json::json!({
                    "schema_version": SCHEMA_VERSION,
                    "data": path.file_name().map(|n| n.to_string_lossy().into_owned()),
                    "columns": columns,
                    "config": config,
                });
                let mut f = BufWriter::new(File::create(sidecar_path(path))?);
                writeln!(f, "{}", to_json(&side)?)?;
                f.flush()?;
            }
            Ok(())
        }
        Format::Json => write_json_table(&mut w, config, columns, rows),
    }
}
