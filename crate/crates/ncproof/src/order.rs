//! Variables and the linear order ≼ that parameterizes everything "ordered".

use std::fmt;

/// A variable x_i, or its formal complement x̄_i when `barred` is set.
/// Barred variables exist only in PCR proofs and in the domain of τ.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct VarId {
    pub index: u32,
    pub barred: bool,
}

impl VarId {
    pub fn plain(index: u32) -> VarId {
        VarId {
            index,
            barred: false,
        }
    }

    pub fn barred(index: u32) -> VarId {
        VarId {
            index,
            barred: true,
        }
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.barred {
            write!(f, "X{}", self.index)
        } else {
            write!(f, "x{}", self.index)
        }
    }
}

/// A linear order on variable indices. The default is x_1 ≺ x_2 ≺ …;
/// a custom order permutes the positions of a prefix 1..=n and falls back
/// to index order beyond it, so extending the variable set always extends
/// the order.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct Order {
    /// `positions[i-1]` is the position of x_i; empty means identity.
    positions: Vec<u32>,
}

impl Order {
    pub fn default_order() -> Order {
        Order::default()
    }

    /// Builds an order from the position of each of x_1..x_n.
    /// `positions` must be a permutation of 1..=n.
    pub fn from_positions(positions: Vec<u32>) -> Option<Order> {
        let n = positions.len();
        let mut seen = vec![false; n];
        for &p in &positions {
            if p == 0 || p as usize > n || seen[p as usize - 1] {
                return None;
            }
            seen[p as usize - 1] = true;
        }
        Some(Order { positions })
    }

    pub fn is_default(&self) -> bool {
        self.positions.iter().enumerate().all(|(i, &p)| p as usize == i + 1)
    }

    /// Position of x_i under ≼. Indices beyond the explicit prefix keep
    /// their natural position.
    pub fn position(&self, index: u32) -> u32 {
        if index as usize <= self.positions.len() {
            self.positions[index as usize - 1]
        } else {
            index
        }
    }

    pub fn le(&self, a: u32, b: u32) -> bool {
        self.position(a) <= self.position(b)
    }

    pub fn lt(&self, a: u32, b: u32) -> bool {
        self.position(a) < self.position(b)
    }

    /// Sorts variable indices into ≼-nondecreasing order.
    pub fn sort_indices(&self, indices: &mut [u32]) {
        indices.sort_by_key(|&i| self.position(i));
    }

    pub fn explicit_positions(&self) -> &[u32] {
        &self.positions
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_default() {
            write!(f, "default")
        } else {
            let parts: Vec<String> = self.positions.iter().map(|p| p.to_string()).collect();
            write!(f, "{}", parts.join(" "))
        }
    }
}
