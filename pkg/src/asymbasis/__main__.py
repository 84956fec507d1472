from asymbasis.cli import main

main()
