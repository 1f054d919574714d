use super::PlanarDiagram;
use crate::error::{Error, Result};

/// The pretzel link P(p₁, …, pₙ): n vertical twist regions side by side,
/// region k holding |pₖ| crossings, neighbouring regions joined at top and
/// bottom. Positive parameters twist so that in every crossing the strand
/// from lower left to upper right passes over.
pub fn pretzel(params: &[i32]) -> Result<PlanarDiagram> {
    if params.len() < 2 || params.contains(&0) {
        return Err(Error::BadPretzel(params.to_vec()));
    }
    let n = params.len() as u32;
    // top arcs 0..n, bottom arcs n..2n, then internal edges
    let top = |i: u32| i % n;
    let bottom = |i: u32| n + i % n;
    let mut next = 2 * n;
    let mut tuples = Vec::new();
    for (i, &p) in params.iter().enumerate() {
        let i = i as u32;
        let m = p.unsigned_abs();
        let (mut tl, mut tr) = (top(i + n - 1), top(i));
        for k in 0..m {
            let (bl, br) = if k + 1 == m {
                (bottom(i + n - 1), bottom(i))
            } else {
                next += 2;
                (next - 2, next - 1)
            };
            // counterclockwise from the under-strand
            tuples.push(if p > 0 { [tl, bl, br, tr] } else { [bl, br, tr, tl] });
            tl = bl;
            tr = br;
        }
    }
    PlanarDiagram::from_unoriented(tuples, 0)
}

/// Parse `p1,p2,...` or `P(p1, p2, ...)`.
pub fn parse_pretzel(text: &str) -> Result<PlanarDiagram> {
    let t = text.trim();
    let t = t.strip_prefix('P').or_else(|| t.strip_prefix('p')).unwrap_or(t);
    let params = t
        .trim_matches(|c| matches!(c, '(' | ')' | '[' | ']') || char::is_whitespace(c))
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<i32>().map_err(|_| Error::BadPretzel(Vec::new())))
        .collect::<Result<Vec<_>>>()?;
    pretzel(&params)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shapes() {
        let d = pretzel(&[3, 3, -3]).unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (9, 1));
        let d = pretzel(&[3, 4, -3]).unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (10, 1));
        let d = pretzel(&[1, 1]).unwrap();
        assert_eq!((d.crossing_count(), d.component_count()), (2, 2));
        let d = pretzel(&[2, 2, 2]).unwrap();
        assert_eq!(d.component_count(), 3);
    }

    #[test]
    fn rejects_bad_parameters() {
        assert!(matches!(pretzel(&[]), Err(Error::BadPretzel(_))));
        assert!(matches!(pretzel(&[3]), Err(Error::BadPretzel(_))));
        assert!(matches!(pretzel(&[2, 0]), Err(Error::BadPretzel(_))));
        assert!(parse_pretzel("P(3,3,-3)").is_ok());
        assert!(parse_pretzel("3 x").is_err());
    }
}
