# FuncBoost - Main Package
