//! ASCII PLY export of vessel point clouds.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use clogprep_core::pointcloud::{Point, PointCloudSample};
use clogprep_core::Rgb;

use crate::error::{Error, Result};

const HEADER_PROPERTIES: [&str; 6] = [
    "property float x",
    "property float y",
    "property float z",
    "property uchar red",
    "property uchar green",
    "property uchar blue",
];

/// Renders the cloud with one `x y z r g b` line per point in `(z, y, x)`
/// order. Coordinates are integral, so they are printed without a fraction.
pub fn to_ply_string(pc: &PointCloudSample) -> String {
    let mut out = String::with_capacity(200 + pc.len() * 20);
    out.push_str("ply\nformat ascii 1.0\n");
    let _ = writeln!(out, "element vertex {}", pc.len());
    for p in HEADER_PROPERTIES {
        out.push_str(p);
        out.push('\n');
    }
    out.push_str("end_header\n");
    for (p, c) in pc.points().iter().zip(pc.colors()) {
        let _ = writeln!(out, "{} {} {} {} {} {}", p.x, p.y, p.z, c[0], c[1], c[2]);
    }
    out
}

pub fn write_ply(pc: &PointCloudSample, path: &Path) -> Result<()> {
    fs::write(path, to_ply_string(pc)).map_err(Error::io(path))
}

/// Parses the layout written by [`to_ply_string`]. Coordinates must be
/// non-negative integers.
pub fn parse_ply(text: &str) -> Result<Vec<(Point, Rgb)>> {
    let err = |line: usize, reason: &str| Error::Ply { line, reason: reason.to_owned() };
    let mut lines = text.lines().enumerate().map(|(i, l)| (i + 1, l));
    expect_line(&mut lines, "ply")?;
    expect_line(&mut lines, "format ascii 1.0")?;
    let (n, count_line) = lines.next().ok_or_else(|| err(0, "truncated header"))?;
    let count: usize = count_line
        .strip_prefix("element vertex ")
        .and_then(|c| c.parse().ok())
        .ok_or_else(|| err(n, "expected element vertex <n>"))?;
    for p in HEADER_PROPERTIES {
        expect_line(&mut lines, p)?;
    }
    expect_line(&mut lines, "end_header")?;

    let mut out = Vec::with_capacity(count);
    for (n, line) in lines {
        let fields: Vec<&str> = line.split_ascii_whitespace().collect();
        if fields.len() != 6 {
            return Err(err(n, "expected 6 fields"));
        }
        let coord = |s: &str| s.parse::<u32>().map_err(|_| err(n, "bad coordinate"));
        let chan = |s: &str| s.parse::<u8>().map_err(|_| err(n, "bad color"));
        out.push((
            Point::new(coord(fields[0])?, coord(fields[1])?, coord(fields[2])?),
            [chan(fields[3])?, chan(fields[4])?, chan(fields[5])?],
        ));
    }
    if out.len() != count {
        return Err(err(0, &format!("header declares {count} vertices, found {}", out.len())));
    }
    Ok(out)
}

fn expect_line<'a>(lines: &mut impl Iterator<Item = (usize, &'a str)>, want: &str) -> Result<()> {
    match lines.next() {
        Some((_, l)) if l == want => Ok(()),
        Some((line, l)) => Err(Error::Ply { line, reason: format!("expected {want:?}, found {l:?}") }),
        None => Err(Error::Ply { line: 0, reason: "truncated header".into() }),
    }
}

pub fn read_ply(path: &Path) -> Result<Vec<(Point, Rgb)>> {
    parse_ply(&fs::read_to_string(path).map_err(Error::io(path))?)
}
