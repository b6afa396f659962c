//! Markovian comparison channel.

use crate::bloch::{AffineQubitChannel, ChannelFamily};
use crate::error::{domain, Result};

/// Amplitude damping with decay `p(t) = e^{-γt}`:
/// `T = diag(√p, -√p, p)`, `r = (0, 0, p - 1)`.
///
/// The `-√p` entry is a y-reflection composed with standard amplitude
/// damping, so at `t = 0` the map is that reflection rather than the
/// identity. Angles, lengths and fidelities are unaffected.
pub fn amplitude_damping(gamma: f64, t: f64) -> Result<AffineQubitChannel> {
    if !(gamma > 0.0) || !gamma.is_finite() {
        return Err(domain(format!("damping rate must be > 0, got {gamma}")));
    }
    if !(t >= 0.0) {
        return Err(domain(format!("time must be non-negative, got {t}")));
    }
    let p = (-gamma * t).exp();
    let sp = p.sqrt();
    Ok(AffineQubitChannel::new(
        [[sp, 0.0, 0.0], [0.0, -sp, 0.0], [0.0, 0.0, p]],
        [0.0, 0.0, p - 1.0],
    ))
}

/// Amplitude damping as a channel family.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct AmplitudeDamping {
    pub gamma: f64,
}

impl ChannelFamily for AmplitudeDamping {
    fn channel_at(&self, t: f64) -> Result<AffineQubitChannel> {
        amplitude_damping(self.gamma, t)
    }
}
