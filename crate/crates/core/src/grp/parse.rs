use std::path::Path;

use crate::error::{Error, Result};
use crate::grp::group::{FiniteGroup, GROUP_CAP};
use crate::grp::perm::{Perm, MAX_INPUT_DEGREE};

/// Parses a group file: the degree on the first content line, then one
/// generator per line as 1-based images. `#` starts a comment line.
pub fn parse_group_text(text: &str) -> Result<(usize, Vec<Perm>)> {
    let mut degree = None;
    let mut gens = Vec::new();
    for (k, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let nums: Vec<usize> = fields
            .iter()
            .map(|f| {
                f.parse::<usize>()
                    .map_err(|_| Error::Parse { line: k + 1, msg: format!("not an integer: {f:?}") })
            })
            .collect::<Result<_>>()?;
        match degree {
            None => {
                if nums.len() != 1 || nums[0] == 0 || nums[0] > MAX_INPUT_DEGREE {
                    return Err(Error::Parse {
                        line: k + 1,
                        msg: format!("expected a degree in 1..={MAX_INPUT_DEGREE}"),
                    });
                }
                degree = Some(nums[0]);
            }
            Some(n) => {
                if nums.len() != n {
                    return Err(Error::Parse {
                        line: k + 1,
                        msg: format!("expected {n} images, found {}", nums.len()),
                    });
                }
                let p = Perm::from_one_based(&nums)
                    .map_err(|e| Error::Parse { line: k + 1, msg: e.to_string() })?;
                gens.push(p);
            }
        }
    }
    let degree = degree.ok_or(Error::Parse { line: 0, msg: "missing degree line".into() })?;
    Ok((degree, gens))
}

pub fn load_group(path: &Path, cap: Option<usize>) -> Result<FiniteGroup> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
    let (degree, gens) = parse_group_text(&text)?;
    FiniteGroup::from_generators_capped(degree, gens, cap.unwrap_or(GROUP_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_blank_lines() {
        let (n, gens) = parse_group_text("# S3\n3\n\n2 1 3\n# rotation\n2 3 1\n").unwrap();
        assert_eq!(n, 3);
        assert_eq!(gens.len(), 2);
        assert_eq!(gens[1].to_string(), "(1,2,3)");
    }

    #[test]
    fn rejects_bad_lines() {
        assert!(matches!(parse_group_text("3\n1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_group_text("3\n1 1 2\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_group_text("x\n"), Err(Error::Parse { line: 1, .. })));
        assert!(parse_group_text("").is_err());
        assert!(parse_group_text("65\n").is_err());
    }
}
