from vir25.main import main

if __name__ == "__main__":
    main()
