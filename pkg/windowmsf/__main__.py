from windowmsf.main import main

raise SystemExit(main())
