//! Line-oriented fan file parser.
//!
//! Format:
//! ```text
//! # comment
//! rank 2
//! ray 0 1 0
//! ray 1 0 1
//! ray 2 -1 -1
//! cone 0 1
//! cone 1 2
//! cone 2 0
//! divisor 1 0 0
//! ```
//! `ray <id> <c1> .. <cn>` with ids numbered 0..R-1 in order, `cone` lines
//! list maximal cones by ray id (faces are closed automatically), and the
//! optional `divisor` line gives one coefficient per ray in id order.

use frobsplit::divisor::Divisor;
use frobsplit::lattice::Fan;
use frobsplit::{Error, Result};

#[derive(Debug)]
pub struct FanFile {
    pub fan: Fan,
    pub divisor: Option<Divisor>,
}

fn parse_err(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

pub fn parse_fan_str(text: &str) -> Result<FanFile> {
    let mut rank: Option<usize> = None;
    let mut rays: Vec<Vec<i64>> = Vec::new();
    let mut cones: Vec<Vec<usize>> = Vec::new();
    let mut divisor: Option<Vec<i64>> = None;
    for (li, raw) in text.lines().enumerate() {
        let line_no = li + 1;
        let line = match raw.find('#') {
            Some(pos) => &raw[..pos],
            None => raw,
        };
        let mut words = line.split_whitespace();
        let Some(keyword) = words.next() else { continue };
        let col = raw.find(keyword).map_or(1, |c| c + 1);
        match keyword {
            "rank" => {
                let v = words
                    .next()
                    .ok_or_else(|| parse_err(line_no, col, "rank needs a value"))?;
                let r: usize = v
                    .parse()
                    .map_err(|_| parse_err(line_no, col, format!("bad rank {:?}", v)))?;
                if rank.replace(r).is_some() {
                    return Err(parse_err(line_no, col, "rank declared twice"));
                }
            }
            "ray" => {
                let n = rank.ok_or_else(|| {
                    parse_err(line_no, col, "rank must be declared before rays")
                })?;
                let id_word = words
                    .next()
                    .ok_or_else(|| parse_err(line_no, col, "ray needs an id"))?;
                let id: usize = id_word
                    .parse()
                    .map_err(|_| parse_err(line_no, col, format!("bad ray id {:?}", id_word)))?;
                if id != rays.len() {
                    return Err(parse_err(
                        line_no,
                        col,
                        format!("ray ids must be consecutive; expected {}", rays.len()),
                    ));
                }
                let coords: Vec<i64> = words
                    .map(|w| {
                        w.parse().map_err(|_| {
                            parse_err(line_no, col, format!("bad coordinate {:?}", w))
                        })
                    })
                    .collect::<Result<_>>()?;
                if coords.len() != n {
                    return Err(parse_err(
                        line_no,
                        col,
                        format!("ray has {} coordinates, expected {}", coords.len(), n),
                    ));
                }
                rays.push(coords);
            }
            "cone" => {
                let ids: Vec<usize> = words
                    .map(|w| {
                        w.parse()
                            .map_err(|_| parse_err(line_no, col, format!("bad ray id {:?}", w)))
                    })
                    .collect::<Result<_>>()?;
                if ids.is_empty() {
                    return Err(parse_err(line_no, col, "cone needs at least one ray id"));
                }
                cones.push(ids);
            }
            "divisor" => {
                let coeffs: Vec<i64> = words
                    .map(|w| {
                        w.parse().map_err(|_| {
                            parse_err(line_no, col, format!("bad coefficient {:?}", w))
                        })
                    })
                    .collect::<Result<_>>()?;
                if divisor.replace(coeffs).is_some() {
                    return Err(parse_err(line_no, col, "divisor declared twice"));
                }
            }
            other => {
                return Err(parse_err(
                    line_no,
                    col,
                    format!("unknown keyword {:?}", other),
                ));
            }
        }
    }
    let rank = rank.ok_or_else(|| parse_err(1, 1, "missing rank declaration"))?;
    if let Some(d) = &divisor {
        if d.len() != rays.len() {
            return Err(parse_err(
                1,
                1,
                format!(
                    "divisor has {} coefficients but there are {} rays",
                    d.len(),
                    rays.len()
                ),
            ));
        }
    }
    let fan = Fan::new(rank, rays, cones)?;
    Ok(FanFile {
        fan,
        divisor: divisor.map(Divisor::new),
    })
}

pub fn parse_fan_file(path: &std::path::Path) -> Result<FanFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::InvalidInput(format!("cannot read {}: {}", path.display(), e)))?;
    parse_fan_str(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P2: &str = "\
# the projective plane
rank 2
ray 0 1 0
ray 1 0 1
ray 2 -1 -1
cone 0 1
cone 1 2
cone 2 0
";

    #[test]
    fn parses_p2_with_face_closure() {
        let f = parse_fan_str(P2).unwrap();
        assert_eq!(f.fan.rays().len(), 3);
        assert_eq!(f.fan.cones().len(), 7);
        assert!(f.divisor.is_none());
    }

    #[test]
    fn nonprimitive_ray_is_normalized_with_flag() {
        let text = "rank 2\nray 0 2 0\nray 1 0 1\ncone 0 1\n";
        let f = parse_fan_str(text).unwrap();
        assert!(f.fan.normalized_rays);
        assert_eq!(f.fan.rays()[0], vec![1, 0]);
    }

    #[test]
    fn axiom_violation_passes_through() {
        let text = "rank 2\nray 0 1 0\nray 1 0 1\nray 2 1 1\ncone 0 1\ncone 1 2\n";
        assert!(matches!(
            parse_fan_str(text),
            Err(Error::FanAxiomViolation { .. })
        ));
    }

    #[test]
    fn parse_errors_carry_position() {
        let err = parse_fan_str("rank 2\nray 0 1 bad\n").unwrap_err();
        match err {
            Error::Parse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
        assert!(parse_fan_str("ray 0 1 0\n").is_err());
        assert!(parse_fan_str("rank 2\nray 1 1 0\n").is_err());
    }

    #[test]
    fn divisor_length_checked() {
        let text = "rank 2\nray 0 1 0\nray 1 0 1\ncone 0 1\ndivisor 1\n";
        assert!(parse_fan_str(text).is_err());
        let ok = "rank 2\nray 0 1 0\nray 1 0 1\ncone 0 1\ndivisor 1 2\n";
        let f = parse_fan_str(ok).unwrap();
        assert_eq!(f.divisor.unwrap().coeffs, vec![1, 2]);
    }
}
