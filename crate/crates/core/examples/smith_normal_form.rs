//! Smith normal form of a small matrix and the group it presents.
//!
//!     cargo run --example smith_normal_form

use eschenburg::intlinalg::{cokernel, smith_normal_form, IntMatrix};

fn main() {
    let m = IntMatrix::from_rows(&[&[2, 4, 4], &[-6, 6, 12], &[10, -4, -16]]);
    let s = smith_normal_form(&m);
    let d: Vec<String> = s.diagonal.iter().map(ToString::to_string).collect();
    println!("diagonal  [{}]", d.join(", "));
    println!(
        "left unimodular: {}, right unimodular: {}",
        s.left.is_unimodular(),
        s.right.is_unimodular()
    );
    let check = s.left.mul(&m).unwrap().mul(&s.right).unwrap();
    println!(
        "left * m * right is diagonal: {}",
        check == IntMatrix::diagonal(3, 3, &s.diagonal)
    );
    println!("cokernel  {}", cokernel(&m));
}
