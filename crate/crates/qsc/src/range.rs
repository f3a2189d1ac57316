//! Integer ranges as given on the command line: `3..15`, `1,-1`, `1..4,9`.
//! Both ends of `a..b` are included.

use anyhow::{bail, Context, Result};

pub fn parse_range(text: &str) -> Result<Vec<i64>> {
    let mut out = Vec::new();
    for item in text.split(',').map(str::trim) {
        if item.is_empty() {
            bail!("empty item in range `{text}`");
        }
        match item.split_once("..") {
            Some((lo, hi)) => {
                let lo: i64 = lo.trim().parse().with_context(|| format!("bad range start in `{item}`"))?;
                let hi: i64 = hi.trim().parse().with_context(|| format!("bad range end in `{item}`"))?;
                if lo > hi {
                    bail!("range `{item}` is empty");
                }
                out.extend(lo..=hi);
            }
            None => out.push(item.parse().with_context(|| format!("`{item}` is not an integer"))?),
        }
    }
    let mut seen = std::collections::HashSet::new();
    out.retain(|v| seen.insert(*v));
    Ok(out)
}

pub fn parse_unsigned<T: TryFrom<i64>>(text: &str, what: &str) -> Result<Vec<T>> {
    parse_range(text)?
        .into_iter()
        .map(|v| T::try_from(v).map_err(|_| anyhow::anyhow!("{what} = {v} is out of range")))
        .collect()
}
