"""Fifty expressions over the n = 2 chart, all defined on [-2,-0.1] U [0.1,2]."""

CORPUS = [
    "w",
    "1/p1",
    "exp(q1)",
    "exp(0.5*p1+q2)",
    "exp(q1)*p1",
    "-q1^2",
    "2^3^2",
    "1+2*3",
    "w+p1*q1+p2*q2",
    "(w+1)*(p1-2)",
    "p1/q1",
    "p1/q1/q2",
    "p1-q1-q2",
    "-(p1+q1)",
    "--w",
    "-w^3",
    "(-w)^3",
    "w^-2",
    "2^-w",
    "q1^4-3*q1^2+2",
    "ln(1+p1^2)",
    "ln(q1^2)*p2",
    "sqrt(4+w)",
    "sqrt(1+p1^2+q1^2)",
    "exp(-w^2)*p1",
    "exp(p1*q1)/(1+q2^2)",
    "(1+p1^2)^0.5",
    "(1+q1^2)^(p2/3)",
    "(2+w)^(1+q2)",
    "1/(1+exp(-q1))",
    "ln(exp(p1)+exp(q1))",
    "w*p1*q1*p2*q2",
    "(w-p1)*(w-q1)*(w-p2)",
    "3.5e-1*w+1.25*p1",
    ".5*q1-2.*q2",
    "1e2/(1e2+p1^2)",
    "sqrt(sqrt(2+p1))",
    "exp(exp(0.1*q2))",
    "ln(ln(3+p2^2))",
    "(p1+q1)^2-(p1-q1)^2",
    "p1^2*q1/(1+w^2)^2",
    "1/p1+1/q1+1/p2+1/q2",
    "-(1/p1)^2",
    "w/(1-0.1*p1)",
    "exp(q1)-exp(-q1)",
    "(exp(q1)+exp(-q1))/2",
    "p2^3-p2",
    "2*w-(3*p1-(4*q1-5*q2))",
    "sqrt(q1^2+q2^2+0.01)*exp(w/4)",
    "(1+w^2)^-1.5*p1",
]

assert len(CORPUS) == 50
