//! Small graphs shared by the unit tests.

use crate::graph::Graph;

pub fn p2() -> Graph {
    Graph::new(&[1, 2], &[(1, 2)]).unwrap()
}

pub fn k3() -> Graph {
    Graph::complete(3).unwrap()
}

/// Triangle 1-2-3 with the pendant edge {1,4}.
pub fn fig1() -> Graph {
    Graph::new(&[1, 2, 3, 4], &[(1, 2), (2, 3), (1, 3), (1, 4)]).unwrap()
}

/// Square 1-2-3-4 with the diagonal {1,3}.
pub fn diag_rect() -> Graph {
    Graph::new(&[1, 2, 3, 4], &[(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)]).unwrap()
}

pub fn cycle(n: u32) -> Graph {
    Graph::cycle(n).unwrap()
}

pub fn path(n: u32) -> Graph {
    Graph::path(n).unwrap()
}

/// Deterministic values in [-1, 1) for tests that need "random" data.
pub struct Lcg(pub u64);

impl Lcg {
    pub fn next(&mut self) -> f64 {
        self.0 = self.0.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        ((self.0 >> 11) as f64 / (1u64 << 53) as f64) * 2.0 - 1.0
    }

    /// Integer in [-5, 5].
    pub fn int(&mut self) -> f64 {
        libm::floor((self.next() + 1.0) * 5.5) - 5.0
    }

    pub fn vec(&mut self, n: usize) -> alloc::vec::Vec<f64> {
        (0..n).map(|_| self.next()).collect()
    }
}
