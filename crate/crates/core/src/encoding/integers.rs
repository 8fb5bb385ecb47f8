//! Universal code for the integers and its restriction to {1, 2}.

/// Rissanen's normalising constant for the universal integer code.
pub const RISSANEN_K0: f64 = 2.865064;

/// Code length of the universal code for integers,
/// `L_N(i) = log2(k0) + log2(i) + log2(log2(i)) + ...` summing the iterated
/// logarithms while they stay positive.
pub fn universal_integer_code(i: u64) -> f64 {
    assert!(i >= 1, "universal integer code is defined for i >= 1");
    let mut bits = RISSANEN_K0.log2();
    let mut x = i as f64;
    loop {
        x = x.log2();
        if x <= 0.0 {
            break;
        }
        bits += x;
    }
    bits
}

/// The universal integer code renormalised over {1, 2} by maximum entropy:
/// `L_{N|2}(i) = -log2( 2^-L_N(i) / (2^-L_N(1) + 2^-L_N(2)) )`.
pub fn restricted_integer_code(i: u64) -> f64 {
    assert!(i == 1 || i == 2, "restricted integer code is defined on {{1, 2}}");
    let p1 = (-universal_integer_code(1)).exp2();
    let p2 = (-universal_integer_code(2)).exp2();
    let p = if i == 1 { p1 } else { p2 };
    -(p / (p1 + p2)).log2()
}
