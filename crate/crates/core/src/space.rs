//! Tags identifying which factor of the bipartite Hilbert space an object
//! lives on.  Every operator and superoperator carries one so that tensor
//! products, partial traces and embeddings cannot silently mix factors.

/// Which tensor factor (or the full product) an operator acts on.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Subsystem {
    A,
    B,
    AB,
}

/// Hilbert-space tag: the subsystem together with both factor dimensions.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct SpaceTag {
    pub which: Subsystem,
    pub dim_a: usize,
    pub dim_b: usize,
}

impl SpaceTag {
    pub fn a(dim_a: usize, dim_b: usize) -> Self {
        assert!(dim_a >= 1 && dim_b >= 1, "dimensions must be >= 1");
        SpaceTag { which: Subsystem::A, dim_a, dim_b }
    }

    pub fn b(dim_a: usize, dim_b: usize) -> Self {
        assert!(dim_a >= 1 && dim_b >= 1, "dimensions must be >= 1");
        SpaceTag { which: Subsystem::B, dim_a, dim_b }
    }

    pub fn ab(dim_a: usize, dim_b: usize) -> Self {
        assert!(dim_a >= 1 && dim_b >= 1, "dimensions must be >= 1");
        SpaceTag { which: Subsystem::AB, dim_a, dim_b }
    }

    /// Dimension of the Hilbert space this tag refers to.
    pub fn dim(&self) -> usize {
        match self.which {
            Subsystem::A => self.dim_a,
            Subsystem::B => self.dim_b,
            Subsystem::AB => self.dim_a * self.dim_b,
        }
    }

    /// The tag for the same bipartition but a different subsystem.
    pub fn retag(&self, which: Subsystem) -> Self {
        SpaceTag { which, ..*self }
    }

    pub fn same_partition(&self, other: &SpaceTag) -> bool {
        self.dim_a == other.dim_a && self.dim_b == other.dim_b
    }
}
