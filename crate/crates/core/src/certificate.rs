//! Line-based certificate files: a cover, the target it claims to cover and
//! the class its boxes claim to be in.
//!
//! ```text
//! hadwiger-certificate
//! format_version 1
//! dimension 4
//! family cover88
//! class nonstrict
//! created unix:1791000000
//! meta <key> <value>
//! target faces 24
//! face 00**
//! target segments 0
//! target points 0
//! boxes 88
//! box 0:1/4 0:1/4 0:1/4 0:1/4
//! digest <sha256 hex>
//! ```
//!
//! The digest covers every line except `created` and `digest` itself.

use std::fmt::Write as _;

use sha2::{Digest, Sha256};

use crate::error::{CoverError, Result};
use crate::geometry::{BoxClass, CubeFace, Cuboid, Point};
use crate::rational::Rational;
use crate::skeleton::{Segment, Target};
use crate::verify::{covers_target, Cover, CoverageReport};

pub const FORMAT_VERSION: u32 = 1;
const MAGIC: &str = "hadwiger-certificate";

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub dimension: usize,
    pub family: String,
    pub class: BoxClass,
    pub created: String,
    /// Free-form `key value` pairs in insertion order; keys have no spaces.
    pub meta: Vec<(String, String)>,
    pub target: Target,
    pub boxes: Vec<Cuboid>,
}

fn point_text(p: &Point) -> String {
    p.0.iter()
        .map(Rational::to_string)
        .collect::<Vec<_>>()
        .join(",")
}

fn box_text(b: &Cuboid) -> String {
    (0..b.dim())
        .map(|i| {
            let (lo, hi) = b.interval(i);
            format!("{lo}:{hi}")
        })
        .collect::<Vec<_>>()
        .join(" ")
}

fn bad(line: usize, msg: impl std::fmt::Display) -> CoverError {
    CoverError::Parse(format!("line {line}: {msg}"))
}

fn parse_point(s: &str, n: usize, line: usize) -> Result<Point> {
    let coords = s
        .split(',')
        .map(str::parse)
        .collect::<Result<Vec<Rational>>>()
        .map_err(|e| bad(line, e))?;
    if coords.len() != n {
        return Err(bad(
            line,
            format!("point `{s}` does not have {n} coordinates"),
        ));
    }
    Ok(Point(coords))
}

fn parse_box(s: &str, n: usize, line: usize) -> Result<Cuboid> {
    let mut lo = Vec::with_capacity(n);
    let mut hi = Vec::with_capacity(n);
    for part in s.split(' ') {
        let (a, b) = part
            .split_once(':')
            .ok_or_else(|| bad(line, format!("interval `{part}` lacks `:`")))?;
        lo.push(a.parse().map_err(|e| bad(line, e))?);
        hi.push(b.parse().map_err(|e| bad(line, e))?);
    }
    if lo.len() != n {
        return Err(bad(line, format!("box does not have {n} intervals")));
    }
    Cuboid::new(lo, hi).map_err(|e| bad(line, e))
}

impl Certificate {
    pub fn new(family: &str, cover: &Cover, target: Target) -> Self {
        Certificate {
            dimension: cover.dim,
            family: family.to_string(),
            class: cover.declared_class,
            created: String::new(),
            meta: Vec::new(),
            target,
            boxes: cover.boxes.clone(),
        }
    }

    pub fn with_meta(mut self, key: &str, value: impl std::fmt::Display) -> Self {
        self.meta.push((key.to_string(), value.to_string()));
        self
    }

    pub fn meta_value(&self, key: &str) -> Option<&str> {
        self.meta
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn cover(&self) -> Result<Cover> {
        Cover::new(self.dimension, self.boxes.clone(), self.class)
    }

    /// All lines but `created` and `digest`, in file order.
    fn body(&self) -> Vec<String> {
        let mut out = vec![
            MAGIC.to_string(),
            format!("format_version {FORMAT_VERSION}"),
            format!("dimension {}", self.dimension),
            format!("family {}", self.family),
            format!("class {}", self.class.as_str()),
        ];
        for (k, v) in &self.meta {
            out.push(format!("meta {k} {v}"));
        }
        out.push(format!("target faces {}", self.target.faces.len()));
        out.extend(self.target.faces.iter().map(|f| format!("face {f}")));
        out.push(format!("target segments {}", self.target.segments.len()));
        out.extend(self.target.segments.iter().map(|s| {
            let (a, b) = s.endpoints();
            format!("segment {} {}", point_text(a), point_text(b))
        }));
        out.push(format!("target points {}", self.target.points.len()));
        out.extend(
            self.target
                .points
                .iter()
                .map(|p| format!("point {}", point_text(p))),
        );
        out.push(format!("boxes {}", self.boxes.len()));
        out.extend(self.boxes.iter().map(|b| format!("box {}", box_text(b))));
        out
    }

    pub fn digest(&self) -> String {
        let mut h = Sha256::new();
        for line in self.body() {
            h.update(line.as_bytes());
            h.update(b"\n");
        }
        hex::encode(h.finalize())
    }

    pub fn to_text(&self) -> String {
        let body = self.body();
        let mut out = String::new();
        for (i, line) in body.iter().enumerate() {
            if i == 5 {
                let _ = writeln!(out, "created {}", self.created);
            }
            out.push_str(line);
            out.push('\n');
        }
        let _ = writeln!(out, "digest {}", self.digest());
        out
    }

    /// Parses a certificate, rejecting anything [`Certificate::to_text`]
    /// would not have written, including a stale digest.
    pub fn parse(text: &str) -> Result<Self> {
        let lines: Vec<&str> = text.split('\n').collect();
        let mut at = 0usize;
        let mut next = || -> Result<(usize, &str)> {
            let i = at;
            at += 1;
            lines
                .get(i)
                .map(|l| (i + 1, *l))
                .ok_or_else(|| bad(i + 1, "unexpected end of file"))
        };
        fn field<'a>(l: (usize, &'a str), key: &str) -> Result<&'a str> {
            l.1.strip_prefix(key)
                .and_then(|r| r.strip_prefix(' '))
                .ok_or_else(|| bad(l.0, format!("expected `{key} ...`")))
        }
        fn count(l: (usize, &str), key: &str) -> Result<usize> {
            field(l, key)?
                .parse()
                .map_err(|_| bad(l.0, format!("bad count in `{key}`")))
        }

        let l = next()?;
        if l.1 != MAGIC {
            return Err(bad(l.0, "not a certificate"));
        }
        let l = next()?;
        let version: u32 = field(l, "format_version")?
            .parse()
            .map_err(|_| bad(l.0, "bad format_version"))?;
        if version != FORMAT_VERSION {
            return Err(bad(l.0, format!("unsupported format_version {version}")));
        }
        let l = next()?;
        let dimension: usize = field(l, "dimension")?
            .parse()
            .map_err(|_| bad(l.0, "bad dimension"))?;
        if dimension == 0 {
            return Err(bad(l.0, "dimension must be positive"));
        }
        let family = field(next()?, "family")?.to_string();
        let l = next()?;
        let class: BoxClass = field(l, "class")?.parse().map_err(|e| bad(l.0, e))?;
        let created = field(next()?, "created")?.to_string();

        let mut meta = Vec::new();
        let mut l = next()?;
        while let Some(rest) = l.1.strip_prefix("meta ") {
            let (k, v) = rest
                .split_once(' ')
                .ok_or_else(|| bad(l.0, "meta line needs a key and a value"))?;
            meta.push((k.to_string(), v.to_string()));
            l = next()?;
        }

        let mut target = Target::empty(dimension);
        for _ in 0..count(l, "target faces")? {
            let l = next()?;
            let f: CubeFace = field(l, "face")?.parse().map_err(|e| bad(l.0, e))?;
            if f.dim_ambient() != dimension {
                return Err(bad(l.0, "face has the wrong dimension"));
            }
            target.faces.push(f);
        }
        for _ in 0..count(next()?, "target segments")? {
            let l = next()?;
            let (a, b) = field(l, "segment")?
                .split_once(' ')
                .ok_or_else(|| bad(l.0, "segment needs two points"))?;
            let s = Segment::new(
                parse_point(a, dimension, l.0)?,
                parse_point(b, dimension, l.0)?,
            )
            .map_err(|e| bad(l.0, e))?;
            target.segments.push(s);
        }
        for _ in 0..count(next()?, "target points")? {
            let l = next()?;
            target
                .points
                .push(parse_point(field(l, "point")?, dimension, l.0)?);
        }
        let nboxes = count(next()?, "boxes")?;
        let mut boxes = Vec::with_capacity(nboxes);
        for _ in 0..nboxes {
            let l = next()?;
            boxes.push(parse_box(field(l, "box")?, dimension, l.0)?);
        }
        let l = next()?;
        let digest = field(l, "digest")?.to_string();
        let digest_line = l.0;
        let tail: Vec<&str> = lines[digest_line..].to_vec();
        if tail != [""] {
            return Err(bad(digest_line + 1, "trailing content after digest"));
        }

        let cert = Certificate {
            dimension,
            family,
            class,
            created,
            meta,
            target,
            boxes,
        };
        // re-serializing catches non-canonical spellings such as `2/4`
        if cert.to_text() != text {
            let expected = cert.digest();
            if expected != digest {
                return Err(bad(digest_line, "digest does not match the contents"));
            }
            return Err(CoverError::Parse(
                "certificate is not in canonical form".into(),
            ));
        }
        Ok(cert)
    }
}

/// Outcome of re-checking a certificate from scratch.
#[derive(Clone, Debug)]
pub struct CertificateReport {
    /// First box outside the declared class, if any.
    pub class_violation: Option<usize>,
    pub coverage: CoverageReport,
}

impl CertificateReport {
    pub fn ok(&self) -> bool {
        self.class_violation.is_none() && self.coverage.covered
    }
}

pub fn check_certificate(c: &Certificate) -> Result<CertificateReport> {
    let cover = c.cover()?;
    let class_violation = cover.boxes.iter().position(|b| !b.in_class(c.class));
    let coverage = covers_target(&cover, &c.target);
    Ok(CertificateReport {
        class_violation,
        coverage,
    })
}
