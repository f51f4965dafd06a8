use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::IntMatrix;
use crate::rep::quiver::topological_order;
use crate::rep::Quiver;

/// A quiver on `0..m` whose last `m - n` vertices are frozen.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct IceQuiver {
    m: usize,
    n: usize,
    arrows: Vec<(usize, usize)>,
    fully_acyclic: bool,
}

impl IceQuiver {
    /// Vertices are 0-based here; frozen vertices must be `n..m`.
    pub fn new(m: usize, n: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if n > m {
            return Err(Error::InvalidQuiver(format!("{n} mutable vertices out of {m}")));
        }
        let mut pairs = BTreeSet::new();
        for &(s, t) in &arrows {
            if s >= m || t >= m {
                return Err(Error::InvalidQuiver(format!("arrow {} -> {} out of range", s + 1, t + 1)));
            }
            if s == t {
                return Err(Error::InvalidQuiver(format!("loop at vertex {}", s + 1)));
            }
            pairs.insert((s, t));
        }
        if let Some(&(s, t)) = pairs.iter().find(|&&(s, t)| pairs.contains(&(t, s))) {
            return Err(Error::InvalidQuiver(format!("2-cycle between {} and {}", s + 1, t + 1)));
        }
        let principal: Vec<(usize, usize)> =
            arrows.iter().copied().filter(|&(s, t)| s < n && t < n).collect();
        if topological_order(n, &principal).is_none() {
            return Err(Error::NotAcyclic);
        }
        let fully_acyclic = topological_order(m, &arrows).is_some();
        Ok(Self { m, n, arrows, fully_acyclic })
    }

    /// `Q` with one frozen copy `i + n -> i` of every vertex.
    pub fn principal_framing(q: &Quiver) -> Self {
        let n = q.vertices();
        let mut arrows = q.arrows().to_vec();
        arrows.extend((0..n).map(|i| (i + n, i)));
        Self::new(2 * n, n, arrows).expect("framing of an acyclic quiver")
    }

    pub fn vertices(&self) -> usize {
        self.m
    }

    pub fn mutable(&self) -> usize {
        self.n
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn is_fully_acyclic(&self) -> bool {
        self.fully_acyclic
    }

    pub fn principal(&self) -> Quiver {
        let arrows = self.arrows.iter().copied().filter(|&(s, t)| s < self.n && t < self.n).collect();
        Quiver::new(self.n, arrows).expect("principal part checked acyclic")
    }

    /// The square matrix of the whole quiver, frozen vertices included.
    pub fn extended_matrix(&self) -> IntMatrix {
        let mut b = IntMatrix::zeros(self.m, self.m);
        for &(s, t) in &self.arrows {
            b[(s, t)] += 1;
            b[(t, s)] -= 1;
        }
        b
    }

    /// The `m × n` exchange matrix `B̃`.
    pub fn b_tilde(&self) -> IntMatrix {
        self.extended_matrix().left_columns(self.n)
    }
}

/// How `Λ` is obtained for a parsed quiver.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum LambdaSpec {
    /// `(B̃°)^{-T}`.
    Auto,
    Explicit(IntMatrix),
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct QuiverFile {
    pub quiver: IceQuiver,
    pub lambda: LambdaSpec,
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn parse_ints(line: usize, words: &[&str]) -> Result<Vec<i64>> {
    words
        .iter()
        .map(|w| w.parse::<i64>().map_err(|_| parse_err(line, format!("expected an integer, got {w:?}"))))
        .collect()
}

/// Parses the line-based quiver format (`vertices`, `frozen`, `arrow`, `lambda`).
/// Vertex numbers in the file are 1-based; `#` starts a comment.
pub fn parse_quiver(text: &str) -> Result<QuiverFile> {
    let mut m: Option<usize> = None;
    let mut frozen: Vec<usize> = Vec::new();
    let mut arrows = Vec::new();
    let mut lambda_auto = false;
    let mut lambda_rows: Vec<Vec<i64>> = Vec::new();
    let mut last_line = 0;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        last_line = line;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let words: Vec<&str> = content.split_whitespace().collect();
        let vertex = |w: &str| -> Result<usize> {
            let total = m.ok_or_else(|| parse_err(line, "`vertices` must come first"))?;
            match w.parse::<usize>() {
                Ok(v) if (1..=total).contains(&v) => Ok(v - 1),
                _ => Err(parse_err(line, format!("bad vertex {w:?} (expected 1..={total})"))),
            }
        };
        match words[0] {
            "vertices" => {
                if m.is_some() {
                    return Err(parse_err(line, "duplicate `vertices`"));
                }
                match words[1..] {
                    [w] => m = Some(w.parse().map_err(|_| parse_err(line, format!("bad vertex count {w:?}")))?),
                    _ => return Err(parse_err(line, "usage: vertices m")),
                }
            }
            "frozen" => {
                for w in &words[1..] {
                    frozen.push(vertex(w)?);
                }
            }
            "arrow" => match words[1..] {
                [a, b] => arrows.push((vertex(a)?, vertex(b)?)),
                _ => return Err(parse_err(line, "usage: arrow i j")),
            },
            "lambda" => match words.get(1) {
                Some(&"auto") if words.len() == 2 => lambda_auto = true,
                Some(&"row") => lambda_rows.push(parse_ints(line, &words[2..])?),
                _ => return Err(parse_err(line, "usage: lambda auto | lambda row v1 ... vm")),
            },
            other => return Err(parse_err(line, format!("unknown directive {other:?}"))),
        }
    }
    let m = m.ok_or_else(|| parse_err(last_line.max(1), "missing `vertices`"))?;
    frozen.sort_unstable();
    frozen.dedup();
    let n = m - frozen.len();
    if frozen.iter().copied().ne(n..m) {
        return Err(parse_err(last_line, "frozen vertices must be the last ones"));
    }
    let lambda = match (lambda_auto, lambda_rows.is_empty()) {
        (true, false) => return Err(parse_err(last_line, "both `lambda auto` and explicit rows")),
        (_, true) => LambdaSpec::Auto,
        (false, false) => {
            if lambda_rows.len() != m || lambda_rows.iter().any(|r| r.len() != m) {
                return Err(parse_err(last_line, format!("lambda must be {m} rows of {m} entries")));
            }
            LambdaSpec::Explicit(IntMatrix::from_rows(&lambda_rows))
        }
    };
    Ok(QuiverFile { quiver: IceQuiver::new(m, n, arrows)?, lambda })
}

#[cfg(test)]
mod tests {
    use super::*;

    const A2: &str = "vertices 4\nfrozen 3 4\narrow 1 2\narrow 2 3\narrow 3 1\narrow 4 2\nlambda auto\n";

    #[test]
    fn b_tilde_of_framed_a2() {
        let q = parse_quiver(A2).unwrap().quiver;
        assert_eq!(q.b_tilde(), IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0], vec![1, -1], vec![0, 1]]));
        assert!(!q.is_fully_acyclic());
    }

    #[test]
    fn small_b_matrices() {
        let q = IceQuiver::new(2, 2, vec![(0, 1)]).unwrap();
        assert_eq!(q.b_tilde(), IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]]));
        assert!(IceQuiver::new(3, 2, vec![]).unwrap().b_tilde().is_zero());
    }

    #[test]
    fn rejects_bad_quivers() {
        assert_eq!(IceQuiver::new(2, 2, vec![(0, 1), (1, 0)]).unwrap_err().to_string(), "invalid quiver: 2-cycle between 1 and 2");
        assert_eq!(IceQuiver::new(3, 3, vec![(0, 1), (1, 2), (2, 0)]), Err(Error::NotAcyclic));
        assert!(IceQuiver::new(3, 2, vec![(0, 1), (1, 2), (2, 0)]).is_ok());
        assert!(matches!(IceQuiver::new(1, 1, vec![(0, 0)]), Err(Error::InvalidQuiver(_))));
    }

    #[test]
    fn parse_errors_carry_lines() {
        let err = parse_quiver("vertices 2\narrow 1 3\n").unwrap_err();
        assert_eq!(err, Error::Parse { line: 2, msg: "bad vertex \"3\" (expected 1..=2)".into() });
        assert!(matches!(parse_quiver("arrow 1 2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_quiver("vertices 3\nfrozen 1\n"), Err(Error::Parse { .. })));
        assert!(matches!(parse_quiver("vertices 2\nbogus\n"), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn explicit_lambda() {
        let f = parse_quiver("vertices 2\narrow 1 2\nlambda row 0 1\nlambda row -1 0\n").unwrap();
        assert_eq!(f.lambda, LambdaSpec::Explicit(IntMatrix::from_rows(&[vec![0, 1], vec![-1, 0]])));
    }
}
