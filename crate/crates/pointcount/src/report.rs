//! Shared plumbing for machine-readable reports: schema version, rational
//! formatting, and cache fingerprints.

use num_rational::Ratio;

/// Version of the JSON report schema, embedded as `"spec_version"`.
pub const SPEC_VERSION: &str = "1";

/// Exact rational as `"num/den"`, to keep reports lossless.
pub fn rational_string<T: Clone + num_integer::Integer + std::fmt::Display>(
    x: &Ratio<T>,
) -> String {
    format!("{}/{}", x.numer(), x.denom())
}

/// FNV-1a fingerprint of cache bytes, embedded in reports so identical
/// configs over identical caches are recognizably identical runs.
pub fn fingerprint(bytes: &[u8]) -> u64 {
    let mut hash = 0xcbf2_9ce4_8422_2325u64;
    for &b in bytes {
        hash ^= b as u64;
        hash = hash.wrapping_mul(0x0000_0100_0000_01b3);
    }
    hash
}
