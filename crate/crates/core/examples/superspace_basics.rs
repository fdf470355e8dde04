//! Arithmetic in Q[x1..xn] ⊗ ∧(θ1..θn): products, the Euler operator d, and
//! the action of one element on another by differentiation and contraction.

use superzono::{Rational, SuperElement};

fn main() {
    let n = 2;
    let (x1, x2) = (SuperElement::x(n, 0), SuperElement::x(n, 1));
    let (t1, t2) = (SuperElement::theta(n, 0), SuperElement::theta(n, 1));

    println!("θ2 · θ1          = {}", &t2 * &t1);
    println!("(x1 θ2)(x2 θ1)   = {}", &(&x1 * &t2) * &(&x2 * &t1));
    println!("d(x1 x2)         = {}", (&x1 * &x2).euler_d());
    println!("d(d(x1^2 x2))    = {}", (&x1.pow(2) * &x2).euler_d().euler_d());

    let sum = &x1 + &x2;
    println!("(x1+x2)^2 ⊙ x1x2 = {}", sum.pow(2).apply(&(&x1 * &x2)).unwrap());
    println!("θ2 ⊙ θ1θ2        = {}", t2.apply(&(&t1 * &t2)).unwrap());

    let f = &(&x1.pow(2) * &t1) + &x2.scale(&Rational::new(1, 2));
    for (bd, part) in f.bihomogeneous_components() {
        println!("component {bd}: {part}");
    }
}
