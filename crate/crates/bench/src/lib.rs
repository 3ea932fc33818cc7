//! Parameter grids shared by the benchmarks.

use gfib_core::Order;

/// Orders swept by every benchmark.
pub const ORDERS: [i64; 5] = [2, 3, 5, 8, 13];

/// Indices for the exact and closed-form benchmarks.
pub const INDICES: [i64; 4] = [10, 100, 1_000, 10_000];

pub fn order(d: i64) -> Order {
    Order::new(d).expect("benchmark orders are >= 2")
}
