# Group Variety Cohomology - exact l-adic cohomology of group varieties
__version__ = "0.3.0"
