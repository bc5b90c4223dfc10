use fqsparse::arith::primes_up_to;
use fqsparse::search::{brute_oracle_max, max_roots_for_prime, Convention};

#[test]
fn normalized_family_matches_full_coefficient_space() {
    let mut mismatches = Vec::new();
    for p in primes_up_to(60) {
        for conv in [Convention::Strict, Convention::Extended] {
            let fast = max_roots_for_prime(p, conv).unwrap();
            let brute = brute_oracle_max(p, conv).unwrap();
            if fast.max_count != brute.max_count || fast.achieved_counts != brute.achieved_counts {
                mismatches.push((p, conv, fast.achieved_counts, brute.achieved_counts));
            }
        }
    }
    assert!(mismatches.is_empty(), "{mismatches:?}");
}
