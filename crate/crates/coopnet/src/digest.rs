//! Content digests for provenance records (run manifests, graph identity).

use sha2::{Digest, Sha256};

/// SHA-256 digest of `bytes` as lowercase hex.
pub fn hex_digest(bytes: &[u8]) -> String {
    let hash = Sha256::digest(bytes);
    let mut out = String::with_capacity(64);
    for byte in hash {
        use std::fmt::Write as _;
        write!(out, "{:02x}", byte).expect("write to string");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::hex_digest;

    #[test]
    fn matches_known_sha256() {
        assert_eq!(
            hex_digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
        assert_eq!(hex_digest(b"").len(), 64);
    }
}
