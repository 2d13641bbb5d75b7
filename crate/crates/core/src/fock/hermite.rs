use num_traits::Num;

/// Physicists' Hermite polynomial `H_n(y)` by upward recurrence
/// `H_{k+1} = 2y H_k - 2k H_{k-1}`.
///
/// Generic over any numeric ring so exact rationals can be fed through the
/// same code path as floats.
pub fn hermite<T: Num + Clone>(n: usize, y: T) -> T {
    let two = T::one() + T::one();
    let mut prev = T::one();
    if n == 0 {
        return prev;
    }
    let mut curr = two.clone() * y.clone();
    // 2k for k = 1, 2, ...
    let mut two_k = two.clone();
    for _ in 1..n {
        let next = two.clone() * y.clone() * curr.clone() - two_k.clone() * prev;
        prev = curr;
        curr = next;
        two_k = two_k + two.clone();
    }
    curr
}
