//! Wavefront OBJ export (positions and triangles only).

use std::fmt::Write as _;
use std::path::Path;

use crate::cga::Vec3;
use crate::error::ModelIoError;
use crate::mesh::Face;

use super::{read_text, write_text};

/// `printf("%.9g")` formatting. Negative zero prints as `0`.
pub fn format_g9(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{x:.8e}");
    let (mant, exp) = sci.split_once('e').expect("exponent present");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-4..9).contains(&exp) {
        let decimals = (8 - exp) as usize;
        trim_zeros(&format!("{x:.decimals$}"))
    } else {
        let sign = if exp < 0 { '-' } else { '+' };
        format!("{}e{sign}{:02}", trim_zeros(mant), exp.abs())
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s.to_string()
    }
}

/// OBJ text: all `v` records, then all `f` records with 1-based indices.
pub fn obj_to_string(vertices: &[Vec3], faces: &[Face]) -> String {
    let mut s = String::with_capacity(vertices.len() * 32 + faces.len() * 16);
    for v in vertices {
        let _ = writeln!(
            s,
            "v {} {} {}",
            format_g9(v.x),
            format_g9(v.y),
            format_g9(v.z)
        );
    }
    for f in faces {
        let _ = writeln!(s, "f {} {} {}", f[0] + 1, f[1] + 1, f[2] + 1);
    }
    s
}

pub fn export_obj(
    vertices: &[Vec3],
    faces: &[Face],
    path: impl AsRef<Path>,
) -> Result<(), ModelIoError> {
    write_text(path.as_ref(), &obj_to_string(vertices, faces))
}

/// Reads `v` and triangular `f` records; other records are ignored.
pub fn parse_obj(text: &str) -> Result<(Vec<Vec3>, Vec<Face>), ModelIoError> {
    let mut v = Vec::new();
    let mut f = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let path = || format!("line {}", n + 1);
        let mut it = line.split_whitespace();
        match it.next() {
            Some("v") => {
                let c: Vec<f64> = it
                    .take(3)
                    .map(|t| t.parse::<f64>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| ModelIoError::schema(path(), e.to_string()))?;
                if c.len() != 3 {
                    return Err(ModelIoError::schema(path(), "vertex needs 3 coordinates"));
                }
                v.push(Vec3::new(c[0], c[1], c[2]));
            }
            Some("f") => {
                let idx: Vec<usize> = it
                    .map(|t| t.split('/').next().unwrap_or("").parse::<usize>())
                    .collect::<Result<_, _>>()
                    .map_err(|e| ModelIoError::schema(path(), e.to_string()))?;
                if idx.len() != 3 || idx.contains(&0) {
                    return Err(ModelIoError::schema(
                        path(),
                        "face needs 3 one-based indices",
                    ));
                }
                f.push([idx[0] - 1, idx[1] - 1, idx[2] - 1]);
            }
            _ => {}
        }
    }
    Ok((v, f))
}

pub fn read_obj(path: impl AsRef<Path>) -> Result<(Vec<Vec3>, Vec<Face>), ModelIoError> {
    parse_obj(&read_text(path.as_ref())?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn g9_matches_printf() {
        let cases = [
            (0.5, "0.5"),
            (-0.0, "0"),
            (1.0, "1"),
            (100.0, "100"),
            (0.1 + 0.2, "0.3"),
            (1.0 / 3.0, "0.333333333"),
            (123456789.0, "123456789"),
            (1234567890.0, "1.23456789e+09"),
            (0.0001, "0.0001"),
            (0.00001234, "1.234e-05"),
            (-2.5e-17, "-2.5e-17"),
            (9.9999999996, "10"),
        ];
        for (x, s) in cases {
            assert_eq!(format_g9(x), s, "{x}");
        }
    }

    #[test]
    fn round_trip() {
        let v = vec![
            Vec3::new(0.1, -2.0, 3.5e-7),
            Vec3::new(1.0, 2.0, 3.0),
            Vec3::zeros(),
        ];
        let f = vec![[0, 1, 2]];
        let text = obj_to_string(&v, &f);
        assert_eq!(text, "v 0.1 -2 3.5e-07\nv 1 2 3\nv 0 0 0\nf 1 2 3\n");
        let (v2, f2) = parse_obj(&text).unwrap();
        assert_eq!(f2, f);
        for (a, b) in v.iter().zip(&v2) {
            assert!((a - b).amax() <= 1e-9 * a.amax().max(1.0));
        }
    }
}
