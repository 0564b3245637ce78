/// Size caps that keep every scan desk-scale. All checks that could blow up
/// consult these and fail with `SizeLimitExceeded` instead of hanging.
#[derive(Clone, Debug)]
pub struct Limits {
    /// Maximum number of lattice elements (also caps downset enumeration).
    pub lattice_size: usize,
    /// Maximum number of join-irreducibles the subset-scan oracle will accept.
    pub oracle_ji: usize,
    /// Maximum number of maps an exhaustive enumeration may produce.
    pub enumeration: usize,
    /// Maximum number of triples an exhaustive associativity scan may visit.
    pub triples: u64,
    /// Maximum number of entries in a precomputed operation table.
    pub op_table: usize,
    /// Carrier size up to which distributivity families are enumerated exhaustively.
    pub exhaustive_family_carrier: usize,
    /// Number of seeded random families used when exhaustive enumeration is off.
    pub sampled_families: usize,
    /// Carrier size up to which sampled-mode audits still run exhaustive-only claims.
    pub sampled_fallback_carrier: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            lattice_size: 4096,
            oracle_ji: 20,
            enumeration: 1_000_000,
            triples: 100_000_000,
            op_table: 4_000_000,
            exhaustive_family_carrier: 12,
            sampled_families: 1000,
            sampled_fallback_carrier: 100,
        }
    }
}

impl Limits {
    /// Default limits, with `QLAB_LIMIT` (when set) overriding the lattice size cap.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Ok(raw) = std::env::var("QLAB_LIMIT") {
            if let Ok(n) = raw.trim().parse::<usize>() {
                if n > 0 {
                    limits.lattice_size = n;
                }
            }
        }
        limits
    }
}
