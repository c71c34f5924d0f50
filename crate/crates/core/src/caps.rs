/// Resource limits for the exhaustive procedures. Exceeding one is an error,
/// never a silent truncation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Caps {
    /// Variables in a two-valued model enumeration (o-models enumerate over
    /// one variable per occurrence).
    pub bool_vars: usize,
    /// Variables in a three-valued LP_m scan.
    pub lpm_vars: usize,
    /// Occurrences in a relation-lattice enumeration.
    pub occurrences: usize,
    /// Relations visited by a lattice traversal or duality sweep.
    pub relations: u64,
}

impl Default for Caps {
    fn default() -> Caps {
        Caps {
            bool_vars: crate::semantics::DEFAULT_BOOL_CAP,
            lpm_vars: 16,
            occurrences: 24,
            relations: 2_000_000,
        }
    }
}
