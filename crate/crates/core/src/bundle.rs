use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum number of items.
pub const MAX_ITEMS: usize = 16;

/// A subset of items stored as a bitmask; bit `i` is item `i + 1` in labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Bundle(pub u32);

impl Bundle {
    pub const EMPTY: Bundle = Bundle(0);

    pub fn full(n: usize) -> Bundle {
        assert!(n <= MAX_ITEMS);
        Bundle(((1u64 << n) - 1) as u32)
    }

    pub fn from_items(items: &[usize]) -> Bundle {
        Bundle(items.iter().fold(0, |m, &i| m | (1 << i)))
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn contains(self, item: usize) -> bool {
        self.0 >> item & 1 == 1
    }

    pub fn is_subset(self, other: Bundle) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_proper_subset(self, other: Bundle) -> bool {
        self != other && self.is_subset(other)
    }

    pub fn union(self, other: Bundle) -> Bundle {
        Bundle(self.0 | other.0)
    }

    pub fn intersection(self, other: Bundle) -> Bundle {
        Bundle(self.0 & other.0)
    }

    /// Zero-based item indices in increasing order.
    pub fn items(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }

    /// All `2^n` bundles in mask order, the empty bundle first.
    pub fn all(n: usize) -> impl Iterator<Item = Bundle> {
        (0..1u32 << n).map(Bundle)
    }

    /// Label such as `[1,2]`, with one-based item numbers.
    pub fn label(self) -> String {
        let items: Vec<String> = self.items().map(|i| (i + 1).to_string()).collect();
        format!("[{}]", items.join(","))
    }

    /// Parses a one-based label such as `[1,2]` or `[]`.
    pub fn parse_label(s: &str, n: usize) -> Result<Bundle> {
        let inner = s
            .trim()
            .strip_prefix('[')
            .and_then(|r| r.strip_suffix(']'))
            .ok_or_else(|| Error::Schema(format!("bundle label {s:?} is not of the form [i,j,...]")))?;
        let mut mask = 0u32;
        for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let item: usize = part
                .parse()
                .map_err(|_| Error::Schema(format!("bad item {part:?} in bundle {s:?}")))?;
            if item == 0 || item > n {
                return Err(Error::Schema(format!("item {item} in bundle {s:?} outside 1..={n}")));
            }
            let bit = 1 << (item - 1);
            if mask & bit != 0 {
                return Err(Error::Schema(format!("item {item} repeated in bundle {s:?}")));
            }
            mask |= bit;
        }
        Ok(Bundle(mask))
    }
}

impl fmt::Display for Bundle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return f.write_str("∅");
        }
        let items: Vec<String> = self.items().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", items.join(","))
    }
}

impl Serialize for Bundle {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.label())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn labels_round_trip() {
        for b in Bundle::all(4) {
            assert_eq!(Bundle::parse_label(&b.label(), 4).unwrap(), b);
        }
        assert_eq!(Bundle::parse_label("[1,2]", 2).unwrap(), Bundle(0b11));
        assert_eq!(Bundle::parse_label(" [ 2 ] ", 2).unwrap(), Bundle(0b10));
        assert!(Bundle::parse_label("[3]", 2).is_err());
        assert!(Bundle::parse_label("[1,1]", 2).is_err());
        assert!(Bundle::parse_label("1,2", 2).is_err());
    }

    #[test]
    fn display() {
        assert_eq!(Bundle::EMPTY.to_string(), "∅");
        assert_eq!(Bundle::from_items(&[0, 2]).to_string(), "{1,3}");
    }

    #[test]
    fn subset_is_a_partial_order() {
        let all: Vec<Bundle> = Bundle::all(4).collect();
        for &a in &all {
            assert!(a.is_subset(a));
            for &b in &all {
                if a.is_subset(b) && b.is_subset(a) {
                    assert_eq!(a, b);
                }
                for &c in &all {
                    if a.is_subset(b) && b.is_subset(c) {
                        assert!(a.is_subset(c));
                    }
                }
            }
        }
    }

    #[test]
    fn full_and_empty() {
        assert_eq!(Bundle::full(3).mask(), 0b111);
        assert_eq!(Bundle::full(16).mask(), 0xffff);
        assert!(Bundle::EMPTY.is_subset(Bundle::full(2)));
        assert!(!Bundle::full(2).is_subset(Bundle::from_items(&[0])));
    }
}
