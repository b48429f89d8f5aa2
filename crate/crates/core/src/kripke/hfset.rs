//! Hereditarily finite sets and the cumulative hierarchy.

use std::collections::BTreeSet;
use std::fmt;

use super::ModelError;

/// A hereditarily finite set, stored with sorted, duplicate-free elements so
/// that structural equality is set equality.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct HFSet(Vec<HFSet>);

impl HFSet {
    pub fn empty() -> Self {
        HFSet(Vec::new())
    }

    pub fn from_elements<I: IntoIterator<Item = HFSet>>(elements: I) -> Self {
        let mut v: Vec<HFSet> = elements.into_iter().collect();
        v.sort();
        v.dedup();
        HFSet(v)
    }

    pub fn elements(&self) -> &[HFSet] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn contains(&self, x: &HFSet) -> bool {
        self.0.binary_search(x).is_ok()
    }

    /// Set-theoretic rank: 0 for the empty set.
    pub fn rank(&self) -> usize {
        self.0.iter().map(|e| e.rank() + 1).max().unwrap_or(0)
    }

    /// All sets reachable by iterated membership, excluding `self`.
    pub fn transitive_closure(&self) -> BTreeSet<HFSet> {
        let mut out = BTreeSet::new();
        let mut stack: Vec<&HFSet> = self.0.iter().collect();
        while let Some(x) = stack.pop() {
            if out.insert(x.clone()) {
                stack.extend(x.0.iter());
            }
        }
        out
    }

    /// Canonical text form, e.g. `{}`, `{{}}`, `{{},{{}}}`.
    pub fn encode(&self) -> String {
        let mut s = String::new();
        self.write_into(&mut s);
        s
    }

    fn write_into(&self, s: &mut String) {
        s.push('{');
        for (i, e) in self.0.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            e.write_into(s);
        }
        s.push('}');
    }

    pub fn parse(text: &str) -> Result<HFSet, ModelError> {
        let bytes: Vec<u8> = text.bytes().filter(|b| !b.is_ascii_whitespace()).collect();
        let mut pos = 0;
        let set = parse_at(&bytes, &mut pos)?;
        if pos != bytes.len() {
            return Err(ModelError::BadSetEncoding(text.to_string()));
        }
        Ok(set)
    }
}

fn parse_at(b: &[u8], pos: &mut usize) -> Result<HFSet, ModelError> {
    let bad = || ModelError::BadSetEncoding(String::from_utf8_lossy(b).into_owned());
    if b.get(*pos) != Some(&b'{') {
        return Err(bad());
    }
    *pos += 1;
    let mut elems = Vec::new();
    if b.get(*pos) == Some(&b'}') {
        *pos += 1;
        return Ok(HFSet::empty());
    }
    loop {
        elems.push(parse_at(b, pos)?);
        match b.get(*pos) {
            Some(b',') => *pos += 1,
            Some(b'}') => {
                *pos += 1;
                return Ok(HFSet::from_elements(elems));
            }
            _ => return Err(bad()),
        }
    }
}

impl fmt::Display for HFSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.encode())
    }
}

/// Largest level that [`level`] will build; the next one has 65,536 members.
pub const MAX_LEVEL: usize = 4;

/// Members of the `n`-th level of the cumulative hierarchy: level 0 is empty
/// and level `n+1` is the power set of level `n`.
pub fn level(n: usize) -> Result<Vec<HFSet>, ModelError> {
    if n > MAX_LEVEL {
        return Err(ModelError::LevelTooLarge(n));
    }
    let mut current: Vec<HFSet> = Vec::new();
    for _ in 0..n {
        let m = current.len();
        let mut next = Vec::with_capacity(1 << m);
        for mask in 0u32..(1u32 << m) {
            next.push(HFSet::from_elements(
                (0..m).filter(|i| mask >> i & 1 == 1).map(|i| current[i].clone()),
            ));
        }
        next.sort();
        current = next;
    }
    Ok(current)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings_round_trip() {
        let e = HFSet::empty();
        let one = HFSet::from_elements([e.clone()]);
        let two = HFSet::from_elements([one.clone(), e.clone()]);
        assert_eq!(e.encode(), "{}");
        assert_eq!(one.encode(), "{{}}");
        assert_eq!(two.encode(), "{{},{{}}}");
        for s in [&e, &one, &two] {
            assert_eq!(&HFSet::parse(&s.encode()).unwrap(), s);
        }
        assert_eq!(HFSet::parse("{ {{}} , {} }").unwrap(), two);
        assert!(HFSet::parse("{").is_err());
        assert!(HFSet::parse("{}}").is_err());
    }

    #[test]
    fn level_sizes_follow_powers_of_two() {
        let sizes: Vec<usize> = (0..=4).map(|n| level(n).unwrap().len()).collect();
        assert_eq!(sizes, vec![0, 1, 2, 4, 16]);
        assert!(level(5).is_err());
    }

    #[test]
    fn levels_are_transitive_and_ranked() {
        let v3 = level(3).unwrap();
        for a in &v3 {
            assert!(a.rank() < 3);
            for b in a.transitive_closure() {
                assert!(v3.contains(&b));
            }
        }
    }
}
