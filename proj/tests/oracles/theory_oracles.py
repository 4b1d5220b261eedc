# Independent scipy oracles for values frozen in tests/unit/test_theory.cpp.
import numpy as np
from scipy import integrate, optimize, stats
from scipy.special import expit
def se(r):
    mu=r*np.sqrt(2/np.pi); s2=r*(1-r*2/np.pi); return mu,s2
def mmse_sg(p,r):
    mu,s2=se(r); s=np.sqrt(s2)
    v1=mu*mu/p+s2
    def f(y):
        a=(1-p)*stats.norm.pdf(y,0,s); b=p*stats.norm.pdf(y,0,np.sqrt(v1))
        post_mean_slab = (mu/p)/v1*y
        return 0.0 if a+b==0 else b/(a+b)*post_mean_slab
    py=lambda y:(1-p)*stats.norm.pdf(y,0,s)+p*stats.norm.pdf(y,0,np.sqrt(v1))
    L=14*np.sqrt(v1)
    e=integrate.quad(lambda y:f(y)**2*py(y),-L,L,points=[0],limit=500,epsabs=1e-14,epsrel=1e-13)[0]
    return 1-e
def mmse_rad(p,r):
    mu,s2=se(r); s=np.sqrt(s2); a=1/np.sqrt(p)
    def py(y): return (1-p)*stats.norm.pdf(y,0,s)+p/2*(stats.norm.pdf(y,mu*a,s)+stats.norm.pdf(y,-mu*a,s))
    def f(y):
        wp=p/2*stats.norm.pdf(y,mu*a,s); wm=p/2*stats.norm.pdf(y,-mu*a,s); w0=(1-p)*stats.norm.pdf(y,0,s)
        t=wp+wm+w0
        return 0.0 if t==0 else a*(wp-wm)/t
    L=mu*a+14*s
    e=integrate.quad(lambda y:f(y)**2*py(y),-L,L,points=[0,mu*a,-mu*a],limit=500,epsabs=1e-14,epsrel=1e-13)[0]
    return 1-e
def mmse_lap(p,r):
    mu,s2=se(r); s=np.sqrt(s2); lam=np.sqrt(2*p)
    slab=lambda x:p*0.5*lam*np.exp(-lam*abs(x))
    W=40/lam
    def num(y,k):
        return integrate.quad(lambda x:x**k*slab(x)*stats.norm.pdf(y,mu*x,s),-W,W,points=[0,y/mu],limit=400,epsabs=1e-15,epsrel=1e-12)[0]
    def py(y): return (1-p)*stats.norm.pdf(y,0,s)+num(y,0)
    def f(y): return num(y,1)/py(y)
    L=mu*W/2+10*s
    e=integrate.quad(lambda y:f(y)**2*py(y),-L,L,points=[0],limit=400,epsabs=1e-12,epsrel=1e-10)[0]
    return 1-e
for r in (1,0.5,0.25): print("SG0.4 r=",r,repr(mmse_sg(0.4,r)))
print("SG0.3 r=1",repr(mmse_sg(0.3,1)))
print("Rad0.5 r=1",repr(mmse_rad(0.5,1)))
print("Lap0.4 r=1",repr(mmse_lap(0.4,1)))
pc=optimize.brentq(lambda p: mmse_rad(p,1)-(1-p),0.3,0.95,xtol=1e-12); print("crit den rad",repr(pc))
g=lambda p: p*stats.foldnorm(1/np.sqrt((1-p)/p),scale=np.sqrt((1-p)/p)).mean()-np.sqrt(2/np.pi)
print("crit lin mix",repr(optimize.brentq(g,0.3,0.999,xtol=1e-12)))
