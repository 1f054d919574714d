use std::collections::HashMap;

use super::{PlanarDiagram, Sign};
use crate::error::{Error, Result};

/// Parse a PD code such as `X[1,5,2,4] X[3,1,4,6] X[5,3,6,2]` or the
/// list form `[[1,5,2,4],[3,1,4,6],[5,3,6,2]]`. A bare `O` token adds a
/// crossingless circle.
pub fn parse_pd(text: &str) -> Result<PlanarDiagram> {
    let (tuples, loops) = parse_tuples(text)?;
    PlanarDiagram::from_pd(tuples, loops)
}

fn parse_tuples(text: &str) -> Result<(Vec<[u32; 4]>, usize)> {
    let mut tuples = Vec::new();
    let mut loops = 0;
    let mut numbers: Vec<i64> = Vec::new();
    let mut depth = 0usize;
    let mut token = String::new();
    let flush = |token: &mut String, numbers: &mut Vec<i64>| -> Result<()> {
        if !token.is_empty() {
            let v = token.parse::<i64>().map_err(|_| Error::MalformedPd(format!("bad label `{token}`")))?;
            numbers.push(v);
            token.clear();
        }
        Ok(())
    };
    let body = text.trim();
    let body = body.strip_prefix("PD").unwrap_or(body);
    for ch in body.chars() {
        match ch {
            '[' | '(' => {
                flush(&mut token, &mut numbers)?;
                depth += 1;
            }
            ']' | ')' => {
                flush(&mut token, &mut numbers)?;
                if depth == 0 {
                    return Err(Error::MalformedPd("unbalanced bracket".into()));
                }
                depth -= 1;
                if !numbers.is_empty() {
                    if numbers.len() != 4 {
                        return Err(Error::MalformedPd(format!("tuple of length {}", numbers.len())));
                    }
                    let mut t = [0u32; 4];
                    for (k, &v) in numbers.iter().enumerate() {
                        t[k] = u32::try_from(v)
                            .map_err(|_| Error::MalformedPd(format!("label {v} out of range")))?;
                    }
                    tuples.push(t);
                    numbers.clear();
                }
            }
            c if c.is_ascii_digit() || c == '-' => token.push(c),
            'X' | 'x' | ',' | ';' => flush(&mut token, &mut numbers)?,
            'O' | 'o' if depth == 0 => loops += 1,
            c if c.is_whitespace() => flush(&mut token, &mut numbers)?,
            c => return Err(Error::MalformedPd(format!("unexpected character `{c}`"))),
        }
    }
    flush(&mut token, &mut numbers)?;
    if depth != 0 || !numbers.is_empty() {
        return Err(Error::MalformedPd("unterminated tuple".into()));
    }
    if tuples.is_empty() && loops == 0 {
        return Err(Error::MalformedPd("no crossings".into()));
    }
    Ok((tuples, loops))
}

impl PlanarDiagram {
    /// Build a diagram from PD tuples, deriving crossing signs from the
    /// orientation of the under-strands. Components that pass only over
    /// other strands fall back to the label order of the over-strand.
    pub fn from_pd(tuples: Vec<[u32; 4]>, free_loops: usize) -> Result<Self> {
        let n = tuples.len();
        let mut where_: HashMap<u32, Vec<(usize, usize)>> = HashMap::new();
        for (x, t) in tuples.iter().enumerate() {
            for (s, &e) in t.iter().enumerate() {
                where_.entry(e).or_default().push((x, s));
            }
        }
        if let Some((&e, v)) = where_.iter().filter(|(_, v)| v.len() != 2).min_by_key(|(&e, _)| e) {
            return Err(Error::EdgeMultiplicity { edge: e as i64, count: v.len() });
        }
        let other_end = |x: usize, s: usize| -> (usize, usize) {
            let v = &where_[&tuples[x][s]];
            if v[0] == (x, s) { v[1] } else { v[0] }
        };

        // incoming[x][s]; slots 0 and 2 are fixed by the convention
        let mut incoming: Vec<[Option<bool>; 4]> = vec![[Some(true), None, Some(false), None]; n];
        let mut queue: Vec<(usize, usize)> = (0..n).flat_map(|x| [(x, 0), (x, 2)]).collect();
        let set = |incoming: &mut Vec<[Option<bool>; 4]>, queue: &mut Vec<(usize, usize)>, x: usize, s: usize, v: bool| -> Result<()> {
            match incoming[x][s] {
                Some(old) if old != v => Err(Error::InconsistentOrientation(tuples[x][s] as i64)),
                Some(_) => Ok(()),
                None => {
                    incoming[x][s] = Some(v);
                    let o = (s + 2) % 4;
                    incoming[x][o] = Some(!v);
                    queue.push((x, s));
                    queue.push((x, o));
                    Ok(())
                }
            }
        };
        let mut next_unset = 0;
        loop {
            while let Some((x, s)) = queue.pop() {
                let v = incoming[x][s].expect("queued slots are set");
                let (y, t) = other_end(x, s);
                set(&mut incoming, &mut queue, y, t, !v)?;
            }
            while next_unset < n && incoming[next_unset][1].is_some() {
                next_unset += 1;
            }
            if next_unset == n {
                break;
            }
            let [_, j, _, l] = tuples[next_unset].map(i64::from);
            let positive = j - l == 1 || l - j > 1;
            set(&mut incoming, &mut queue, next_unset, 3, positive)?;
        }
        let signs = incoming
            .iter()
            .map(|inc| if inc[3] == Some(true) { Sign::Positive } else { Sign::Negative })
            .collect();
        Self::from_signed(tuples, signs, free_loops)
    }
}
