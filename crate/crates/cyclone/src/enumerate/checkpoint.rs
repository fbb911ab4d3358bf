//! Line-oriented checkpoint files for pausing and resuming long runs.
//!
//! Format, bit-exact on round trip:
//!
//! ```text
//! cyclone-ckpt v1 n=<n> d=<d>
//! <canonical triangulation> budget=<B> depth=<D>     (one per pending unit)
//! totals visited=<V> flip_edges=<E> max_depth=<M>
//! ```

use std::io::{self, BufRead, Write};
use std::str::FromStr;

use num_bigint::BigUint;

use super::parallel::WorkUnit;
use crate::error::{Error, Result};
use crate::triangulation::Triangulation;

const MAGIC: &str = "cyclone-ckpt";
const VERSION: &str = "v1";

/// A saved coordinator state: the pending unit queue plus partial counters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Checkpoint {
    pub n: u32,
    pub d: u32,
    pub units: Vec<WorkUnit>,
    pub visited: BigUint,
    pub flip_edges: BigUint,
    pub max_depth: usize,
}

impl Checkpoint {
    pub fn write_to<W: Write>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "{MAGIC} {VERSION} n={} d={}", self.n, self.d)?;
        for unit in &self.units {
            writeln!(
                w,
                "{} budget={} depth={}",
                unit.node, unit.budget, unit.depth
            )?;
        }
        writeln!(
            w,
            "totals visited={} flip_edges={} max_depth={}",
            self.visited, self.flip_edges, self.max_depth
        )
    }

    pub fn read_from<R: BufRead>(r: R) -> Result<Checkpoint> {
        let mut lines = r.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::CheckpointFormat("empty file".into()))?
            .map_err(Error::Io)?;
        let fields: Vec<&str> = header.split(' ').collect();
        if fields.len() != 4 || fields[0] != MAGIC {
            return Err(Error::CheckpointFormat(format!(
                "bad header line {header:?}"
            )));
        }
        if fields[1] != VERSION {
            return Err(Error::CheckpointFormat(format!(
                "unsupported version {:?}",
                fields[1]
            )));
        }
        let n = parse_field::<u32>(fields[2], "n=")?;
        let d = parse_field::<u32>(fields[3], "d=")?;

        let mut units = Vec::new();
        let mut totals: Option<(BigUint, BigUint, usize)> = None;
        for (lineno, line) in lines.enumerate() {
            let line = line.map_err(Error::Io)?;
            if totals.is_some() {
                return Err(Error::CheckpointFormat(format!(
                    "content after totals at line {}",
                    lineno + 2
                )));
            }
            if let Some(rest) = line.strip_prefix("totals ") {
                let fields: Vec<&str> = rest.split(' ').collect();
                if fields.len() != 3 {
                    return Err(Error::CheckpointFormat(format!("bad totals line {line:?}")));
                }
                totals = Some((
                    parse_field::<BigUint>(fields[0], "visited=")?,
                    parse_field::<BigUint>(fields[1], "flip_edges=")?,
                    parse_field::<usize>(fields[2], "max_depth=")?,
                ));
                continue;
            }
            let fields: Vec<&str> = line.split(' ').collect();
            if fields.len() != 3 {
                return Err(Error::CheckpointFormat(format!(
                    "bad unit line {} ({} fields)",
                    lineno + 2,
                    fields.len()
                )));
            }
            let node = Triangulation::from_str(fields[0]).map_err(|e| {
                Error::CheckpointFormat(format!("unit at line {}: {e}", lineno + 2))
            })?;
            units.push(WorkUnit {
                node,
                budget: parse_field::<u64>(fields[1], "budget=")?,
                depth: parse_field::<usize>(fields[2], "depth=")?,
            });
        }
        let (visited, flip_edges, max_depth) =
            totals.ok_or_else(|| Error::CheckpointFormat("missing totals line".into()))?;
        Ok(Checkpoint {
            n,
            d,
            units,
            visited,
            flip_edges,
            max_depth,
        })
    }
}

fn parse_field<T: FromStr>(field: &str, key: &str) -> Result<T> {
    field
        .strip_prefix(key)
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| Error::CheckpointFormat(format!("expected {key}<value>, got {field:?}")))
}
