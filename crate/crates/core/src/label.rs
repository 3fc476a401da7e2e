//! Topology families, dimensions and node labels.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest graph `build_graph` will materialize.
pub const MAX_NODES: u64 = 1 << 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Family {
    /// Binary n-cube.
    Hc,
    /// Varietal hypercube.
    Vq,
    /// Balanced hypercube.
    Bh,
    /// Balanced varietal hypercube.
    Bvh,
}

impl Family {
    pub const ALL: [Family; 4] = [Family::Hc, Family::Vq, Family::Bh, Family::Bvh];

    pub fn radix(self) -> u8 {
        match self {
            Family::Hc | Family::Vq => 2,
            Family::Bh | Family::Bvh => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Family::Hc => "hc",
            Family::Vq => "vq",
            Family::Bh => "bh",
            Family::Bvh => "bvh",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Hc => "HC",
            Family::Vq => "VQ",
            Family::Bh => "BH",
            Family::Bvh => "BVH",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hc" | "hypercube" => Ok(Family::Hc),
            "vq" | "vh" | "varietal" => Ok(Family::Vq),
            "bh" | "balanced" => Ok(Family::Bh),
            "bvh" => Ok(Family::Bvh),
            _ => Err(Error::UnknownFamily(s.to_string())),
        }
    }
}

/// A topology family at a fixed dimension.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct TopologySpec {
    family: Family,
    dimension: u32,
}

impl TopologySpec {
    pub fn new(family: Family, dimension: u32) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { family, dimension })
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn dimension(&self) -> u32 {
        self.dimension
    }

    pub fn radix(&self) -> u8 {
        self.family.radix()
    }

    /// `2^n` for the binary families, `4^n` for the quaternary ones.
    /// Saturates at `u64::MAX` for absurd dimensions.
    pub fn node_count(&self) -> u64 {
        let bits = match self.family {
            Family::Hc | Family::Vq => self.dimension,
            Family::Bh | Family::Bvh => self.dimension.saturating_mul(2),
        };
        1u64.checked_shl(bits).unwrap_or(u64::MAX)
    }

    pub fn expected_degree(&self) -> u32 {
        match self.family {
            Family::Hc | Family::Vq => self.dimension,
            Family::Bh | Family::Bvh => 2 * self.dimension,
        }
    }

    pub fn expected_edge_count(&self) -> u64 {
        self.node_count() / 2 * u64::from(self.expected_degree())
    }

    /// The all-zeros label.
    pub fn origin(&self) -> NodeLabel {
        NodeLabel {
            digits: vec![0; self.dimension as usize],
            radix: self.radix(),
        }
    }

    /// Builds a label after checking length and digit range.
    pub fn label(&self, digits: &[u8]) -> Result<NodeLabel> {
        if digits.len() != self.dimension as usize {
            return Err(Error::MalformedLabel(format!(
                "expected {} digits for {}_{}, got {}",
                self.dimension,
                self.family,
                self.dimension,
                digits.len()
            )));
        }
        if let Some(d) = digits.iter().find(|&&d| d >= self.radix()) {
            return Err(Error::MalformedLabel(format!(
                "digit {d} out of range for radix {}",
                self.radix()
            )));
        }
        Ok(NodeLabel {
            digits: digits.to_vec(),
            radix: self.radix(),
        })
    }

    /// Parses a comma-separated digit string such as `0,3,1`.
    /// Binary labels may also be written without separators (`011`).
    pub fn parse_label(&self, text: &str) -> Result<NodeLabel> {
        let text = text.trim();
        let digits: Vec<u8> = if text.contains(',') {
            text.split(',')
                .map(|part| {
                    part.trim().parse::<u8>().map_err(|_| {
                        Error::MalformedLabel(format!("bad digit `{part}` in `{text}`"))
                    })
                })
                .collect::<Result<_>>()?
        } else {
            text.chars()
                .map(|c| {
                    c.to_digit(10).map(|d| d as u8).ok_or_else(|| {
                        Error::MalformedLabel(format!("bad digit `{c}` in `{text}`"))
                    })
                })
                .collect::<Result<_>>()?
        };
        self.label(&digits)
    }

    /// Position of `label` in lexicographic order (digit 0 most significant).
    pub fn index_of(&self, label: &NodeLabel) -> Result<usize> {
        if label.radix != self.radix() || label.digits.len() != self.dimension as usize {
            return Err(Error::MalformedLabel(format!(
                "{label} does not belong to {self}"
            )));
        }
        let radix = usize::from(self.radix());
        let mut idx = 0usize;
        for &d in &label.digits {
            if d >= self.radix() {
                return Err(Error::MalformedLabel(format!(
                    "{label} has a digit out of range"
                )));
            }
            idx = idx * radix + usize::from(d);
        }
        Ok(idx)
    }

    /// Inverse of [`TopologySpec::index_of`].
    pub fn label_at(&self, mut index: usize) -> NodeLabel {
        let radix = usize::from(self.radix());
        let mut digits = vec![0u8; self.dimension as usize];
        for slot in digits.iter_mut().rev() {
            *slot = (index % radix) as u8;
            index /= radix;
        }
        NodeLabel {
            digits,
            radix: self.radix(),
        }
    }
}

impl fmt::Display for TopologySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}_{}", self.family, self.dimension)
    }
}

/// Fixed-length digit vector. For BH/BVH `digits[0]` is the inner coordinate `a_0`;
/// for HC/VQ `digits[0]` is the highest-order bit.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NodeLabel {
    digits: Vec<u8>,
    radix: u8,
}

impl NodeLabel {
    pub fn digits(&self) -> &[u8] {
        &self.digits
    }

    pub fn radix(&self) -> u8 {
        self.radix
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub(crate) fn from_raw(digits: Vec<u8>, radix: u8) -> Self {
        Self { digits, radix }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, d) in self.digits.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{d}")?;
        }
        Ok(())
    }
}
