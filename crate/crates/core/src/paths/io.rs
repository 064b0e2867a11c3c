//! Plain-text path files: `#` comment lines, a `# horizon=.. interpolation=..`
//! preamble, then `t,left,right,kind` rows.

use std::io::{BufRead, Write};

use super::{Breakpoint, CadlagPath, Interpolation};
use crate::error::{Error, Result};

pub const CSV_HEADER: &str = "t,left,right,kind";

impl CadlagPath {
    /// Writes the path, preceded by `comments` (each emitted as `# line`).
    pub fn write_csv<W: Write>(&self, out: &mut W, comments: &[String]) -> std::io::Result<()> {
        for line in comments {
            writeln!(out, "# {line}")?;
        }
        writeln!(out, "# horizon={} interpolation={}", self.horizon, self.interpolation.as_str())?;
        writeln!(out, "{CSV_HEADER}")?;
        for p in &self.points {
            let kind = if p.is_jump() { "jump" } else { "node" };
            writeln!(out, "{},{},{},{kind}", p.t, p.left, p.right)?;
        }
        Ok(())
    }

    pub fn read_csv<R: BufRead>(input: R) -> Result<Self> {
        let mut horizon = None;
        let mut interpolation = None;
        let mut points = Vec::new();
        let mut seen_header = false;
        for (idx, line) in input.lines().enumerate() {
            let lineno = idx + 1;
            let line = line.map_err(|e| Error::Parse {
                line: lineno,
                reason: e.to_string(),
            })?;
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(comment) = line.strip_prefix('#') {
                let comment = comment.trim();
                if comment.starts_with("horizon=") {
                    for field in comment.split_whitespace() {
                        let parse_err = |reason: String| Error::Parse { line: lineno, reason };
                        match field.split_once('=') {
                            Some(("horizon", v)) => horizon = Some(v.parse::<f64>().map_err(|e| parse_err(format!("horizon: {e}")))?),
                            Some(("interpolation", v)) => interpolation = Some(v.parse::<Interpolation>()?),
                            _ => return Err(parse_err(format!("unexpected preamble field {field:?}"))),
                        }
                    }
                }
                continue;
            }
            if !seen_header {
                if line != CSV_HEADER {
                    return Err(Error::Parse {
                        line: lineno,
                        reason: format!("expected header {CSV_HEADER:?}"),
                    });
                }
                seen_header = true;
                continue;
            }
            let fields: Vec<&str> = line.split(',').collect();
            if fields.len() != 4 {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!("expected 4 fields, found {}", fields.len()),
                });
            }
            let num = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    line: lineno,
                    reason: format!("{s:?}: {e}"),
                })
            };
            let p = Breakpoint {
                t: num(fields[0])?,
                left: num(fields[1])?,
                right: num(fields[2])?,
            };
            let expected = if p.is_jump() { "jump" } else { "node" };
            if fields[3] != expected {
                return Err(Error::Parse {
                    line: lineno,
                    reason: format!("kind {:?} does not match values (expected {expected})", fields[3]),
                });
            }
            points.push(p);
        }
        let missing = |what: &str| Error::Parse {
            line: 0,
            reason: format!("missing {what} in preamble"),
        };
        let horizon = horizon.ok_or_else(|| missing("horizon"))?;
        let interpolation = interpolation.ok_or_else(|| missing("interpolation"))?;
        CadlagPath::new(points, interpolation, horizon)
    }
}
