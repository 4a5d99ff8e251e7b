use core::fmt;
use core::str::FromStr;

use alloc::format;

use crate::error::Error;

/// Variable families. The derive order is the canonical variable order.
///
/// `U`, `W` and `Q` hold `e^{λ_i}`, `e^{μ_k}` and `e^{γ}`. `S` is `q^{1/2}`,
/// used where half-integer powers of `q` appear, and `X` is the derived
/// variable `x_i = u_i² w_i⁻²` of the polynomial `Z̄`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum VarKind {
    U,
    W,
    Q,
    S,
    X,
}

impl VarKind {
    pub fn is_indexed(self) -> bool {
        !matches!(self, VarKind::Q | VarKind::S)
    }

    fn letter(self) -> char {
        match self {
            VarKind::U => 'u',
            VarKind::W => 'w',
            VarKind::Q => 'q',
            VarKind::S => 's',
            VarKind::X => 'x',
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct VarId {
    kind: VarKind,
    index: u16,
}

impl VarId {
    /// The index is dropped for `Q` and `S`: there is only one of each.
    pub const fn new(kind: VarKind, index: u16) -> Self {
        let index = match kind {
            VarKind::Q | VarKind::S => 0,
            _ => index,
        };
        VarId { kind, index }
    }

    pub const fn u(i: u16) -> Self {
        VarId::new(VarKind::U, i)
    }

    pub const fn w(k: u16) -> Self {
        VarId::new(VarKind::W, k)
    }

    pub const fn x(i: u16) -> Self {
        VarId::new(VarKind::X, i)
    }

    pub const Q: VarId = VarId::new(VarKind::Q, 0);
    pub const S: VarId = VarId::new(VarKind::S, 0);

    pub fn kind(self) -> VarKind {
        self.kind
    }

    pub fn index(self) -> u16 {
        self.index
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.kind.is_indexed() {
            write!(f, "{}{}", self.kind.letter(), self.index)
        } else {
            write!(f, "{}", self.kind.letter())
        }
    }
}

impl FromStr for VarId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut chars = s.chars();
        let kind = match chars.next() {
            Some('u') => VarKind::U,
            Some('w') => VarKind::W,
            Some('q') => VarKind::Q,
            Some('s') => VarKind::S,
            Some('x') => VarKind::X,
            _ => return Err(Error::Parse(format!("unknown variable `{s}`"))),
        };
        let rest = chars.as_str();
        if !kind.is_indexed() {
            return if rest.is_empty() {
                Ok(VarId::new(kind, 0))
            } else {
                Err(Error::Parse(format!("unknown variable `{s}`")))
            };
        }
        let index = rest
            .parse::<u16>()
            .map_err(|_| Error::Parse(format!("bad variable index in `{s}`")))?;
        Ok(VarId::new(kind, index))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_ignores_index() {
        assert_eq!(VarId::new(VarKind::Q, 3), VarId::new(VarKind::Q, 7));
        assert_ne!(VarId::u(1), VarId::u(2));
    }

    #[test]
    fn canonical_order() {
        assert!(VarId::u(9) < VarId::w(0));
        assert!(VarId::w(9) < VarId::Q);
        assert!(VarId::u(1) < VarId::u(2));
    }

    #[test]
    fn display_parse() {
        for v in [VarId::u(0), VarId::w(12), VarId::Q, VarId::S, VarId::x(3)] {
            let s = alloc::string::ToString::to_string(&v);
            assert_eq!(s.parse::<VarId>().unwrap(), v);
        }
        assert!("z1".parse::<VarId>().is_err());
        assert!("q1".parse::<VarId>().is_err());
    }
}
