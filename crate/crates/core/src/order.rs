use std::fmt;

use crate::error::{Error, Result};

/// The order `d >= 2` of a generalized Fibonacci sequence: each term is the
/// sum of the previous `d` terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Order(usize);

impl Order {
    pub const FIBONACCI: Order = Order(2);
    pub const TRIBONACCI: Order = Order(3);

    pub fn new(d: i64) -> Result<Self> {
        if d < 2 {
            return Err(Error::InvalidOrder(d));
        }
        Ok(Order(d as usize))
    }

    #[inline]
    pub fn get(self) -> usize {
        self.0
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl TryFrom<i64> for Order {
    type Error = Error;

    fn try_from(d: i64) -> Result<Self> {
        Order::new(d)
    }
}
