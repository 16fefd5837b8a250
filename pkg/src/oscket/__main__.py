from oscket.cli import main

raise SystemExit(main())
